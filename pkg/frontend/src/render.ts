// Pure view-model helpers: everything here transforms API payloads into
// drawable geometry without changing any analytic value.

import { MapPoint, TrendTable, VolumeResponse } from "./api.js";

export interface Scaled {
  id: string;
  px: number;
  py: number;
  topicId: number;
}

export function scalePoints(
  points: MapPoint[],
  width: number,
  height: number,
  pad = 20,
): Scaled[] {
  if (!points.length) return [];
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  return points.map((p) => ({
    id: p.id,
    px: pad + ((p.x - minX) / spanX) * (width - 2 * pad),
    py: height - pad - ((p.y - minY) / spanY) * (height - 2 * pad),
    topicId: p.topic_id,
  }));
}

export function topicCenters(points: Scaled[]): Map<number, [number, number]> {
  const sums = new Map<number, [number, number, number]>();
  for (const p of points) {
    if (p.topicId < 0) continue;
    const acc = sums.get(p.topicId) ?? [0, 0, 0];
    sums.set(p.topicId, [acc[0] + p.px, acc[1] + p.py, acc[2] + 1]);
  }
  const centers = new Map<number, [number, number]>();
  for (const [topic, [sx, sy, n]] of sums) centers.set(topic, [sx / n, sy / n]);
  return centers;
}

export interface TrendLine {
  topic: number;
  points: [number, number][];
}

export function trendLines(
  table: TrendTable,
  width: number,
  height: number,
  pad = 24,
): TrendLine[] {
  if (!table.years.length) return [];
  const maxShare = Math.max(0.0001, ...table.shares.flat());
  const stepX =
    table.years.length > 1 ? (width - 2 * pad) / (table.years.length - 1) : 0;
  return table.topics.map((topic, col) => ({
    topic,
    points: table.years.map((_y, row) => [
      pad + row * stepX,
      height - pad - (table.shares[row][col] / maxShare) * (height - 2 * pad),
    ]),
  }));
}

export interface VolumeCell {
  year: number;
  bin: number;
  intensity: number; // 0..1
  count: number;
}

export function volumeCells(volume: VolumeResponse): VolumeCell[] {
  const years = Object.keys(volume.years)
    .map((y) => parseInt(y, 10))
    .sort((a, b) => a - b);
  const peak = Math.max(1, ...Object.values(volume.years).flat());
  const cells: VolumeCell[] = [];
  for (const year of years) {
    const hist = volume.years[String(year)];
    hist.forEach((count, bin) => {
      cells.push({ year, bin, intensity: count / peak, count });
    });
  }
  return cells;
}

export function filterByTopic(
  ids: string[],
  topicOf: Map<string, number>,
  topic: number | null,
): string[] {
  if (topic === null) return ids;
  return ids.filter((id) => topicOf.get(id) === topic);
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), ms);
  };
}
