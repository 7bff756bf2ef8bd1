// Application wiring: URL-backed state, tab routing, and rendering.
// All numbers shown come from the API verbatim.

import { ApiClient, MapPoint, SearchResult, TopicSummary } from "./api.js";
import { colorFor } from "./palette.js";
import {
  debounce,
  filterByTopic,
  scalePoints,
  topicCenters,
  trendLines,
  volumeCells,
} from "./render.js";
import { DEFAULT_STATE, ViewState, parseState, serializeState } from "./state.js";

const api = new ApiClient();
let state: ViewState = parseState(window.location.search);

const el = (id: string) => document.getElementById(id) as HTMLElement;
const input = (id: string) => document.getElementById(id) as HTMLInputElement;
const select = (id: string) => document.getElementById(id) as HTMLSelectElement;

function syncUrl(): void {
  const qs = serializeState(state);
  const url = qs ? `?${qs}` : window.location.pathname;
  window.history.replaceState(null, "", url);
}

function setState(patch: Partial<ViewState>): void {
  state = { ...state, ...patch };
  syncUrl();
  render();
}

function showError(message: string | null): void {
  const banner = el("error-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

async function guard<T>(promise: Promise<T>, apply: (value: T) => void) {
  try {
    apply(await promise);
    showError(null);
  } catch (err) {
    if (!isAbort(err)) showError(String(err));
  }
}

// ------------------------------------------------------------------ search

function resultItem(r: SearchResult): HTMLElement {
  const li = document.createElement("li");
  const link = document.createElement("a");
  link.href = "#";
  link.textContent = `${r.title} (${r.venue} ${r.year})`;
  link.onclick = (ev) => {
    ev.preventDefault();
    setState({ paper: r.id });
  };
  const score = document.createElement("span");
  score.className = "score";
  score.textContent = r.score.toFixed(4);
  li.append(link, score);
  return li;
}

let topicOf = new Map<string, number>();

function renderResults(results: SearchResult[]): void {
  const list = el("results");
  list.innerHTML = "";
  const visible = filterByTopic(
    results.map((r) => r.id), topicOf, state.topic,
  );
  const shown = results.filter((r) => visible.includes(r.id));
  if (!shown.length) {
    el("empty-state").style.display = "block";
    return;
  }
  el("empty-state").style.display = "none";
  for (const r of shown) list.append(resultItem(r));
}

const runSearch = debounce(() => {
  if (!state.query.trim()) {
    el("results").innerHTML = "";
    el("empty-state").style.display = "none";
    return;
  }
  guard(api.search(state.query, state.mode, state.k), (resp) =>
    renderResults(resp.results),
  );
}, 250);

function renderDetail(): void {
  const pane = el("detail");
  if (!state.paper) {
    pane.innerHTML = "";
    return;
  }
  guard(api.paper(state.paper), (d) => {
    pane.innerHTML = "";
    const title = document.createElement("h3");
    title.textContent = d.paper.title;
    const abstract = document.createElement("p");
    abstract.textContent = d.paper.abstract;
    pane.append(title, abstract);
    const lists: [string, { id: string; label: string }[]][] = [
      ["Similar", d.similar.map((s) => ({ id: s.id, label: s.title }))],
      ["Cites", d.cites.map((id) => ({ id, label: id }))],
      ["Cited by", d.cited_by.map((id) => ({ id, label: id }))],
      ["Suggested reads", d.suggested.map((s) => ({
        id: s.id, label: `${s.id} (${s.score} shared)`,
      }))],
    ];
    for (const [heading, items] of lists) {
      if (!items.length) continue;
      const h = document.createElement("h4");
      h.textContent = heading;
      const ul = document.createElement("ul");
      for (const item of items) {
        const li = document.createElement("li");
        const a = document.createElement("a");
        a.href = "#";
        a.textContent = item.label;
        a.onclick = (ev) => {
          ev.preventDefault();
          setState({ paper: item.id });
        };
        li.append(a);
        ul.append(li);
      }
      pane.append(h, ul);
    }
  });
}

// --------------------------------------------------------------------- map

const SVG_NS = "http://www.w3.org/2000/svg";

function renderMap(): void {
  guard(Promise.all([api.map(), api.topics()]), ([points, topics]) => {
    topicOf = new Map(points.map((p: MapPoint) => [p.id, p.topic_id]));
    const svg = el("map-svg");
    svg.innerHTML = "";
    const width = 720;
    const height = 520;
    const scaled = scalePoints(points, width, height);
    for (const p of scaled) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(p.px));
      dot.setAttribute("cy", String(p.py));
      dot.setAttribute("r", "3");
      dot.setAttribute("fill", colorFor(p.topicId));
      const hover = document.createElementNS(SVG_NS, "title");
      hover.textContent = p.id;
      dot.append(hover);
      dot.addEventListener("click", () =>
        setState({ topic: p.topicId >= 0 ? p.topicId : null, tab: "search" }),
      );
      svg.append(dot);
    }
    const byId = new Map(topics.map((t: TopicSummary) => [t.topic_id, t]));
    for (const [topic, [cx, cy]] of topicCenters(scaled)) {
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(cx));
      label.setAttribute("y", String(cy));
      label.setAttribute("class", "topic-label");
      label.textContent =
        byId.get(topic)?.keywords.slice(0, 3).join(" ") ?? String(topic);
      svg.append(label);
    }
  });
}

// ------------------------------------------------------------ trends/volume

function renderTrends(): void {
  guard(api.topics(), (topics) => {
    const toggles = el("topic-toggles");
    toggles.innerHTML = "";
    for (const t of topics) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = !state.hideTopics.includes(t.topic_id);
      box.onchange = () => {
        const hidden = state.hideTopics.filter((x) => x !== t.topic_id);
        if (!box.checked) hidden.push(t.topic_id);
        setState({ hideTopics: hidden });
      };
      label.append(box, ` ${t.topic_id}: ${t.keywords.slice(0, 3).join(" ")}`);
      toggles.append(label);
    }
  });
  guard(api.trends(state.omitYears, state.hideTopics), (table) => {
    const svg = el("trends-svg");
    svg.innerHTML = "";
    const width = 720;
    const height = 320;
    for (const line of trendLines(table, width, height)) {
      const path = document.createElementNS(SVG_NS, "polyline");
      path.setAttribute(
        "points",
        line.points.map(([x, y]) => `${x},${y}`).join(" "),
      );
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", colorFor(line.topic));
      path.setAttribute("stroke-width", "2");
      svg.append(path);
    }
  });
  guard(api.volume(24), (volume) => {
    const svg = el("volume-svg");
    svg.innerHTML = "";
    const cell = 14;
    for (const c of volumeCells(volume)) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(c.bin * cell));
      rect.setAttribute("y", String((c.year % 100) * cell));
      rect.setAttribute("width", String(cell - 1));
      rect.setAttribute("height", String(cell - 1));
      rect.setAttribute("fill", `rgba(31, 119, 180, ${c.intensity})`);
      const hover = document.createElementNS(SVG_NS, "title");
      hover.textContent = `${c.year} bin ${c.bin}: ${c.count}`;
      rect.append(hover);
      svg.append(rect);
    }
  });
}

// ------------------------------------------------------------------- graph

function renderGraph(): void {
  const graph = select("graph-select").value;
  const metric = select("metric-select").value;
  guard(api.centrality(graph, metric, 20), (rows) => {
    const body = el("centrality-body");
    body.innerHTML = "";
    for (const row of rows) {
      const tr = document.createElement("tr");
      const name = document.createElement("td");
      name.textContent = row.node;
      const score = document.createElement("td");
      score.textContent = row.score.toFixed(6);
      tr.append(name, score);
      body.append(tr);
    }
  });
}

// ----------------------------------------------------------------- routing

function render(): void {
  for (const tab of ["search", "map", "trends", "graph"]) {
    el(`tab-${tab}`).classList.toggle("active", tab === state.tab);
    el(`view-${tab}`).style.display = tab === state.tab ? "block" : "none";
  }
  input("query").value = state.query;
  select("mode").value = state.mode;
  input("k").value = String(state.k);
  el("k-value").textContent = String(state.k);
  el("topic-filter").textContent =
    state.topic === null ? "" : `filtered to topic ${state.topic}`;
  if (state.tab === "search") {
    runSearch();
    renderDetail();
  } else if (state.tab === "map") {
    renderMap();
  } else if (state.tab === "trends") {
    renderTrends();
  } else {
    renderGraph();
  }
}

function bind(): void {
  input("query").addEventListener("input", (ev) =>
    setState({ query: (ev.target as HTMLInputElement).value }),
  );
  select("mode").addEventListener("change", (ev) =>
    setState({ mode: (ev.target as HTMLSelectElement).value as ViewState["mode"] }),
  );
  input("k").addEventListener("input", (ev) =>
    setState({ k: parseInt((ev.target as HTMLInputElement).value, 10) }),
  );
  el("clear-topic").addEventListener("click", () => setState({ topic: null }));
  for (const tab of ["search", "map", "trends", "graph"] as const) {
    el(`tab-${tab}`).addEventListener("click", () => setState({ tab }));
  }
  select("graph-select").addEventListener("change", renderGraph);
  select("metric-select").addEventListener("change", renderGraph);
  window.addEventListener("popstate", () => {
    state = parseState(window.location.search);
    render();
  });
}

if (typeof document !== "undefined" && document.getElementById("query")) {
  bind();
  render();
}

export { state, setState, DEFAULT_STATE };
