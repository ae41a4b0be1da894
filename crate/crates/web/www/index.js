import init, { spectrum, controlSweep, propagate } from "./pkg/rydberg_eit_web.js";

const COLORS = ["#1f5fa8", "#c2452d", "#5a9a3a"];

function plot(canvas, x, series, labels) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const all = series.flatMap((s) => Array.from(s)).filter(Number.isFinite);
  let lo = Math.min(...all), hi = Math.max(...all);
  if (hi === lo) { hi += 1; lo -= 1; }
  const x0 = x[0], x1 = x[x.length - 1];
  const px = (v) => pad + ((v - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (v) => h - pad - ((v - lo) / (hi - lo)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);
  ctx.fillText(hi.toPrecision(3), 2, pad + 4);
  ctx.fillText(lo.toPrecision(3), 2, h - pad);

  series.forEach((ys, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(px(x[i]), py(y)) : ctx.moveTo(px(x[i]), py(y))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(labels[k], w - pad - 120, pad + 14 * (k + 1));
  });
}

function showSpectrum() {
  const o2 = Number(document.getElementById("o2").value);
  document.getElementById("o2v").textContent = o2.toFixed(1);
  const s = spectrum(o2, 150, 1201);
  plot(document.getElementById("spectrum-plot"), s.offset, [s.chiIm, s.chiRe], ["chi''", "chi'"]);
  document.getElementById("spectrum-info").textContent =
    `window width ${s.windowWidth.toFixed(2)} Grad/s, n_g(0) = ${s.groupIndexCenter.toExponential(3)}`;
  s.free();
}

function showSweep() {
  const max = Number(document.getElementById("smax").value);
  const s = controlSweep(max, 400);
  const x = s.omega2, ng = s.groupIndex;
  plot(document.getElementById("sweep"), x, [ng], ["n_g(0)"]);
  document.getElementById("sweep-info").textContent =
    `maximum n_g(0) = ${ng[s.argmax].toExponential(3)} at Omega2 = ${x[s.argmax].toFixed(2)} Grad/s`;
  s.free();
}

function showPulse() {
  const o2 = Number(document.getElementById("po2").value);
  const len = Number(document.getElementById("plen").value);
  const info = document.getElementById("pulse-info");
  try {
    const p = propagate(o2, len, 100);
    plot(document.getElementById("pulse"), p.times, [p.input, p.output, p.analytic],
      ["input", "output (PDE)", "output (analytic)"]);
    info.textContent = `delay ${p.delay.toFixed(4)} ns (L/v_g = ${p.predictedDelay.toFixed(4)} ns), ` +
      `peak transmission ${p.attenuation.toExponential(3)}; envelopes normalised to their peaks`;
    p.free();
  } catch (e) {
    info.textContent = String(e);
  }
}

await init();
document.getElementById("o2").addEventListener("input", showSpectrum);
document.getElementById("sweep-run").addEventListener("click", showSweep);
document.getElementById("pulse-run").addEventListener("click", showPulse);
showSpectrum();
showSweep();
showPulse();
