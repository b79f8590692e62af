import init, { curve, limit, spectrum, sample } from "./pkg/qid_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const $ = (id) => document.getElementById(id);

function drawCurves() {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const nMax = Number($("curve-n").value);
  $("curve-n-label").textContent = nMax;
  $("curve-error").textContent = "";
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  let series;
  try {
    const ds = $("curve-d").value.split(",").map((s) => Number(s.trim())).filter((d) => d >= 1);
    series = ds.map((d) => ({ d, values: curve(d, nMax), limit: limit(d) }));
  } catch (e) {
    $("curve-error").textContent = String(e);
    return;
  }

  const pad = { left: 50, right: 70, top: 15, bottom: 30 };
  const w = canvas.width - pad.left - pad.right;
  const h = canvas.height - pad.top - pad.bottom;
  const yMax = Math.max(0.1, Math.ceil(10 * Math.max(...series.map((s) => s.limit))) / 10);
  const x = (n) => pad.left + ((n - 1) / Math.max(1, nMax - 1)) * w;
  const y = (p) => pad.top + (1 - p / yMax) * h;

  ctx.strokeStyle = "#000";
  ctx.strokeRect(pad.left, pad.top, w, h);
  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  for (let k = 0; k <= 5; k++) {
    const p = (yMax * k) / 5;
    ctx.fillText(p.toFixed(2), 10, y(p) + 4);
  }
  ctx.fillText("1", x(1) - 3, canvas.height - 10);
  ctx.fillText(String(nMax), x(nMax) - 8, canvas.height - 10);
  ctx.fillText("N", pad.left + w / 2, canvas.height - 10);

  series.forEach((s, k) => {
    const color = COLORS[k % COLORS.length];
    ctx.strokeStyle = color;
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(pad.left, y(s.limit));
    ctx.lineTo(pad.left + w, y(s.limit));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.values.forEach((p, i) => (i === 0 ? ctx.moveTo(x(i + 1), y(p)) : ctx.lineTo(x(i + 1), y(p))));
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.fillStyle = color;
    ctx.fillText(`d = ${s.d}`, pad.left + w + 10, y(s.limit) + 4);
  });
}

function runSpectrum() {
  const out = $("spectrum-out");
  try {
    const rows = JSON.parse(spectrum(Number($("spectrum-d").value), Number($("spectrum-n").value)));
    const body = rows
      .map(
        (r) =>
          `<tr><td>${r.labels}</td><td>${r.eigenvalue.toFixed(6)}</td><td>${r.multiplicity}</td><td>${r.weight.toFixed(6)}</td></tr>`
      )
      .join("");
    out.innerHTML =
      "<table><tr><th>Young diagrams</th><th>eigenvalue</th><th>multiplicity</th><th>(1-|a|) m</th></tr>" +
      body +
      "</table>";
  } catch (e) {
    out.innerHTML = `<p class="error">${e}</p>`;
  }
}

function runSample() {
  const out = $("mc-out");
  out.textContent = "sampling...";
  setTimeout(() => {
    try {
      const [mean, stderr, target] = sample(
        Number($("mc-d").value),
        Number($("mc-n").value),
        Number($("mc-samples").value),
        BigInt($("mc-seed").value)
      );
      out.textContent = `estimate ${mean.toFixed(5)} ± ${stderr.toFixed(5)}, closed form ${target.toFixed(5)}`;
    } catch (e) {
      out.textContent = String(e);
    }
  }, 0);
}

await init();
$("curve-d").addEventListener("input", drawCurves);
$("curve-n").addEventListener("input", drawCurves);
$("spectrum-run").addEventListener("click", runSpectrum);
$("mc-run").addEventListener("click", runSample);
drawCurves();
runSpectrum();
