import init, { synth, detect } from "./pkg/refnet_web.js";

const SVG = "http://www.w3.org/2000/svg";
const $ = (id) => document.getElementById(id);

function el(name, attrs = {}, parent) {
  const node = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (parent) parent.appendChild(node);
  return node;
}

function colour(community, count) {
  const hue = Math.round((360 * (community - 1)) / Math.max(count, 1));
  return `hsl(${hue} 65% 50%)`;
}

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

// Nodes sit on a circle, grouped by community, sized by total referrals.
function layout(view) {
  const order = view.nodes
    .map((n, i) => ({ ...n, index: i }))
    .sort((a, b) => a.community - b.community || b.total - a.total);
  const maxTotal = Math.max(...view.nodes.map((n) => n.total));
  const gap = 0.35;
  const slots = order.length + gap * view.num_communities;
  const pos = new Array(view.nodes.length);
  let slot = 0;
  let previous = null;
  for (const n of order) {
    if (n.community !== previous) slot += gap;
    previous = n.community;
    const angle = (2 * Math.PI * slot) / slots - Math.PI / 2;
    pos[n.index] = { x: 300 * Math.cos(angle), y: 300 * Math.sin(angle), r: 6 + 24 * Math.sqrt(n.total / maxTotal), angle };
    slot += 1;
  }
  return pos;
}

function drawGraph(view) {
  const svg = $("graph");
  svg.replaceChildren();
  const pos = layout(view);
  const maxWeight = Math.max(...view.edges.map((e) => e.weight));
  const edges = el("g", {}, svg);
  for (const e of view.edges) {
    if (e.from === e.to) continue;
    const a = pos[e.from];
    const b = pos[e.to];
    const same = view.nodes[e.from].community === view.nodes[e.to].community;
    el("path", {
      d: `M${a.x},${a.y} Q0,0 ${b.x},${b.y}`,
      fill: "none",
      stroke: same ? colour(view.nodes[e.from].community, view.num_communities) : "#999",
      "stroke-width": 0.5 + 4 * (e.weight / maxWeight),
      "stroke-opacity": same ? 0.7 : 0.25,
    }, edges);
  }
  view.nodes.forEach((n, i) => {
    const p = pos[i];
    const g = el("g", { class: "node" }, svg);
    const c = el("circle", { cx: p.x, cy: p.y, r: p.r, fill: colour(n.community, view.num_communities), stroke: "#fff" }, g);
    el("title", {}, c).textContent = `${n.id}\ncommunity ${n.community}\nin ${n.referrals_in}, out ${n.referrals_out}`;
    const right = Math.cos(p.angle) >= 0;
    const label = el("text", {
      x: p.x + (p.r + 4) * Math.cos(p.angle),
      y: p.y + (p.r + 4) * Math.sin(p.angle) + 4,
      "text-anchor": right ? "start" : "end",
    }, g);
    label.textContent = n.id;
  });
}

function drawCurve(view) {
  const svg = $("curve");
  svg.replaceChildren();
  const levels = view.levels;
  if (levels.length < 2) {
    const t = el("text", { x: 20, y: 90 }, svg);
    t.textContent = `${view.algorithm}: no dendrogram (Q = ${view.q.toFixed(6)})`;
    return;
  }
  const qs = levels.map((l) => l.q);
  const lo = Math.min(0, ...qs);
  const hi = Math.max(...qs);
  const x = (i) => 40 + (920 * i) / (levels.length - 1);
  const y = (q) => 160 - (140 * (q - lo)) / (hi - lo || 1);
  el("line", { x1: 40, x2: 960, y1: y(0), y2: y(0), stroke: "#ccc" }, svg);
  el("polyline", { points: levels.map((l, i) => `${x(i)},${y(l.q)}`).join(" "), fill: "none", stroke: "#333", "stroke-width": 2 }, svg);
  levels.forEach((l, i) => {
    const best = i === view.best_level;
    const dot = el("circle", { cx: x(i), cy: y(l.q), r: best ? 6 : 3, fill: best ? "#d62728" : "#333" }, svg);
    el("title", {}, dot).textContent = `level ${i}: ${l.num_communities} communities, Q = ${l.q.toFixed(6)}`;
  });
  const t = el("text", { x: 44, y: 16 }, svg);
  t.textContent = `Q by dendrogram level (${view.algorithm}); red = best`;
}

function drawLegend(view) {
  const legend = $("legend");
  legend.replaceChildren();
  const groups = new Map();
  for (const n of view.nodes) {
    if (!groups.has(n.community)) groups.set(n.community, []);
    groups.get(n.community).push(n.id);
  }
  for (const [c, members] of [...groups.entries()].sort((a, b) => a[0] - b[0])) {
    const row = document.createElement("div");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = colour(c, view.num_communities);
    row.append(swatch, `${c}: ${members.join(", ")}`);
    legend.appendChild(row);
  }
}

function generate() {
  try {
    $("edges").value = synth(Number($("synth-seed").value), Number($("subjects").value), Number($("repeat").value), Number($("group").value));
    run();
  } catch (e) {
    status(e.message ?? String(e), true);
  }
}

function run() {
  try {
    const view = JSON.parse(detect($("edges").value, $("algorithm").value, Number($("detect-seed").value)));
    drawGraph(view);
    drawCurve(view);
    drawLegend(view);
    status(`${view.algorithm}: ${view.num_communities} communities, Q = ${view.q.toFixed(6)}`);
  } catch (e) {
    status(e.message ?? String(e), true);
  }
}

for (const id of ["repeat", "group"]) {
  $(id).addEventListener("input", () => ($(`${id}-out`).value = Number($(id).value).toFixed(2)));
}
$("generate").addEventListener("click", generate);
$("run").addEventListener("click", run);
$("algorithm").addEventListener("change", run);

await init();
generate();
