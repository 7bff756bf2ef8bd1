// Fixed 32-color categorical palette; topic ids wrap beyond 32 and the
// noise label (-1) renders gray.

export const NOISE_COLOR = "#9e9e9e";

export const PALETTE: string[] = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7",
  "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39",
  "#7b4173", "#5254a3", "#8ca252", "#bd9e39", "#ad494a", "#a55194",
  "#6b6ecf", "#b5cf6b",
];

export function colorFor(topicId: number): string {
  if (topicId < 0) return NOISE_COLOR;
  return PALETTE[topicId % PALETTE.length];
}
