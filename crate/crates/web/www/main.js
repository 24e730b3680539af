import init, { readoutCurve, transportProfile, searchCurve } from "./pkg/sqc_web.js";

const $ = (id) => document.getElementById(id);
const PAD = 40;

function frame(ctx, xr, yr) {
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(PAD, 10, w - PAD - 10, h - PAD - 10);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(2), PAD, h - PAD + 14);
  ctx.fillText(xr[1].toFixed(2), w - 40, h - PAD + 14);
  ctx.fillText(yr[1].toFixed(2), 2, 18);
  ctx.fillText(yr[0].toFixed(2), 2, h - PAD);
  const sx = (x) => PAD + ((x - xr[0]) / (xr[1] - xr[0])) * (w - PAD - 10);
  const sy = (y) => 10 + (1 - (y - yr[0]) / (yr[1] - yr[0])) * (h - PAD - 20);
  return { sx, sy };
}

function line(ctx, t, xs, ys, color, dots) {
  ctx.strokeStyle = ctx.fillStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(t.sx(x), t.sy(ys[i])) : ctx.moveTo(t.sx(x), t.sy(ys[i]))));
  ctx.stroke();
  if (dots) xs.forEach((x, i) => ctx.fillRect(t.sx(x) - 2, t.sy(ys[i]) - 2, 4, 4));
}

function cols(flat, n) {
  const out = Array.from({ length: n }, () => []);
  flat.forEach((v, i) => out[i % n].push(v));
  return out;
}

function drawReadout() {
  const gamma = 10 ** Number($("gamma").value);
  $("gamma-out").textContent = `Γ = ${gamma.toFixed(3)}`;
  const [p, shift, weak, strong] = cols(readoutCurve($("kind").value, gamma, 200), 4);
  const top = Math.min(4, Math.max(...shift, ...strong) * 1.05);
  const ctx = $("readout").getContext("2d");
  const t = frame(ctx, [0, 1], [0, top]);
  const clip = (ys) => ys.map((y) => Math.min(y, top));
  line(ctx, t, p, clip(weak), "#333");
  line(ctx, t, p, clip(strong), "#888");
  line(ctx, t, p, clip(shift), "#c33");
}

function drawTransport() {
  const [g, d] = $("setting").value.split(",").map(Number);
  const P = Number($("tp").value);
  const N = Number($("tn").value);
  const prof = transportProfile(g, d, P, N);
  const x = Array.from(prof.x());
  const rho = Array.from(prof.density());
  const target = Array.from(prof.target());
  $("transport-out").textContent =
    `P = ${P.toFixed(2)}, N = ${N}: F = ${prof.fidelity().toFixed(4)}, T = ${prof.duration().toFixed(3)}, P_actual = ${prof.probability().toFixed(3)}`;
  const ctx = $("transport").getContext("2d");
  const t = frame(ctx, [x[0], x[x.length - 1]], [0, Math.max(...rho, ...target) * 1.05]);
  line(ctx, t, x, target, "#888");
  line(ctx, t, x, rho, "#36c");
}

function drawSearch() {
  const P = Number($("sp").value);
  const g = Number($("sg").value);
  if (!(g > 0)) return;
  const [n, sqc, one, two] = cols(searchCurve(g, P, 16), 4);
  $("search-out").textContent = `P = ${P.toFixed(2)}: F(N=1) = ${sqc[0].toFixed(5)}, F(N=16) = ${sqc[15].toFixed(8)}`;
  const ctx = $("search").getContext("2d");
  const t = frame(ctx, [1, 16], [Math.min(...one, ...two, ...sqc) * 0.98, 1]);
  line(ctx, t, n, one, "#c33", true);
  line(ctx, t, n, two, "#e80", true);
  line(ctx, t, n, sqc, "#36c", true);
}

function guard(fn, out) {
  return () => {
    try {
      fn();
    } catch (e) {
      $(out).textContent = String(e.message ?? e);
    }
  };
}

await init();
const wire = (ids, fn, out) => {
  const f = guard(fn, out);
  ids.forEach((id) => $(id).addEventListener("input", f));
  f();
};
wire(["kind", "gamma"], drawReadout, "gamma-out");
wire(["setting", "tp", "tn"], drawTransport, "transport-out");
wire(["sp", "sg"], drawSearch, "search-out");
