/** DOM rendering: alphabet bar, pressure triangle, red highlight box, text
 *  output, and the per-episode pressure graph that halts on commit.
 *
 *  Everything shown is server-reported state; bins are never computed here.
 */
import type { SessionState } from "./client.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const GRAPH_W = 560;
const GRAPH_H = 120;

export interface UiRefs {
  root: HTMLElement;
  bar: HTMLElement;
  cells: HTMLElement[];
  triangle: HTMLElement;
  textArea: HTMLElement;
  graphLine: SVGPolylineElement;
  banner: HTMLElement;
  warning: HTMLElement;
}

function displaySymbol(symbol: string): string {
  if (symbol === "SP") return "␣";
  if (symbol === "BS") return "⌫";
  return symbol;
}

/** Build the static structure for a given layout (bin edges at i/n). */
export function buildUi(doc: Document, mount: HTMLElement, layout: string[]): UiRefs {
  mount.textContent = "";
  const root = doc.createElement("div");
  root.className = "presstype";

  const banner = doc.createElement("div");
  banner.className = "banner";
  banner.hidden = true;
  banner.textContent = "disconnected - input disabled";
  root.appendChild(banner);

  const warning = doc.createElement("div");
  warning.className = "tick-warning";
  warning.hidden = true;
  warning.textContent = "sampling is falling behind";
  root.appendChild(warning);

  const textArea = doc.createElement("div");
  textArea.className = "text-output";
  root.appendChild(textArea);

  const barWrap = doc.createElement("div");
  barWrap.className = "bar-wrap";
  const bar = doc.createElement("div");
  bar.className = "alphabet-bar";
  const n = layout.length;
  const cells: HTMLElement[] = [];
  for (let i = 0; i < n; i++) {
    const cell = doc.createElement("div");
    cell.className = "cell";
    // equal bins: each cell spans [i/n, (i+1)/n) of the bar
    cell.style.left = `${(100 * i) / n}%`;
    cell.style.width = `${100 / n}%`;
    cell.textContent = displaySymbol(layout[i]);
    bar.appendChild(cell);
    cells.push(cell);
  }
  barWrap.appendChild(bar);

  const triangle = doc.createElement("div");
  triangle.className = "triangle";
  barWrap.appendChild(triangle);
  root.appendChild(barWrap);

  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "graph");
  svg.setAttribute("viewBox", `0 0 ${GRAPH_W} ${GRAPH_H}`);
  const graphLine = doc.createElementNS(SVG_NS, "polyline") as SVGPolylineElement;
  graphLine.setAttribute("fill", "none");
  graphLine.setAttribute("stroke", "#c22");
  graphLine.setAttribute("stroke-width", "2");
  svg.appendChild(graphLine);
  root.appendChild(svg);

  mount.appendChild(root);
  return { root, bar, cells, triangle, textArea, graphLine, banner, warning };
}

function graphPoints(samples: [number, number][]): string {
  if (samples.length === 0) return "";
  const t0 = samples[0][0];
  const tSpan = Math.max(samples[samples.length - 1][0] - t0, 1e-9);
  return samples
    .map(([t, raw]) => {
      const x = ((t - t0) / tSpan) * GRAPH_W;
      const y = GRAPH_H - raw * GRAPH_H;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

/** Paint the latest server state. */
export function renderFrame(ui: UiRefs, state: SessionState): void {
  ui.banner.hidden = state.phase !== "closed";
  ui.warning.hidden = !state.starved;

  for (let i = 0; i < ui.cells.length; i++) {
    ui.cells[i].classList.toggle("selected", i === state.highlightIndex);
  }
  ui.triangle.style.left = `${100 * state.buffered}%`;

  ui.textArea.textContent = state.text;

  const series = state.frozenGraph ?? state.liveEpisode;
  ui.graphLine.setAttribute("points", graphPoints(series));
  ui.graphLine.classList.toggle("frozen", state.frozenGraph !== null);
}
