// View state mirrored into the URL query string so every view is
// shareable and reload reproduces it exactly.

export type Tab = "search" | "map" | "trends" | "graph";
export type Mode = "semantic" | "keyword";

export interface ViewState {
  query: string;
  mode: Mode;
  k: number;
  paper: string | null;
  topic: number | null;
  tab: Tab;
  hideTopics: number[];
  omitYears: number[];
}

export const DEFAULT_STATE: ViewState = {
  query: "",
  mode: "semantic",
  k: 10,
  paper: null,
  topic: null,
  tab: "search",
  hideTopics: [],
  omitYears: [],
};

const TABS: Tab[] = ["search", "map", "trends", "graph"];

function intList(raw: string | null): number[] {
  if (!raw) return [];
  return raw
    .split(",")
    .map((s) => parseInt(s, 10))
    .filter((n) => Number.isFinite(n));
}

export function parseState(search: string): ViewState {
  const params = new URLSearchParams(search);
  const k = parseInt(params.get("k") ?? "", 10);
  const topicRaw = params.get("topic");
  const topic = topicRaw === null ? null : parseInt(topicRaw, 10);
  const tab = params.get("tab") as Tab;
  return {
    query: params.get("q") ?? "",
    mode: params.get("mode") === "keyword" ? "keyword" : "semantic",
    k: Number.isFinite(k) && k >= 1 ? k : DEFAULT_STATE.k,
    paper: params.get("paper"),
    topic: topic !== null && Number.isFinite(topic) ? topic : null,
    tab: TABS.includes(tab) ? tab : "search",
    hideTopics: intList(params.get("hide")),
    omitYears: intList(params.get("omit")),
  };
}

export function serializeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  if (state.mode !== DEFAULT_STATE.mode) params.set("mode", state.mode);
  if (state.k !== DEFAULT_STATE.k) params.set("k", String(state.k));
  if (state.paper) params.set("paper", state.paper);
  if (state.topic !== null) params.set("topic", String(state.topic));
  if (state.tab !== DEFAULT_STATE.tab) params.set("tab", state.tab);
  if (state.hideTopics.length) params.set("hide", state.hideTopics.join(","));
  if (state.omitYears.length) params.set("omit", state.omitYears.join(","));
  return params.toString();
}
