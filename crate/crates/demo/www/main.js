import init, { deployment, rate, profile } from "./pkg/netmimo_demo.js";

const $ = (id) => document.getElementById(id);
const PROFILE_NODES = 12;

function inputs() {
  return { bbar: Number($("bbar").value), seed: Number($("seed").value) >>> 0 };
}

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function drawLayout() {
  const { bbar, seed } = inputs();
  const v = JSON.parse(deployment(bbar, seed));
  const cv = $("layout");
  const g = cv.getContext("2d");
  const scale = cv.width / (2 * v.half_width);
  const px = ([x, y]) => [cv.width / 2 + x * scale, cv.height / 2 - y * scale];
  g.clearRect(0, 0, cv.width, cv.height);

  g.strokeStyle = "#36c";
  g.beginPath();
  v.hexagon.forEach((p, i) => (i ? g.lineTo(...px(p)) : g.moveTo(...px(p))));
  g.closePath();
  g.stroke();

  g.strokeStyle = "#d33";
  g.beginPath();
  g.arc(cv.width / 2, cv.height / 2, v.radius * scale, 0, 2 * Math.PI);
  g.stroke();

  const uc = new Set(v.user_centric);
  const dj = new Set(v.disjoint);
  v.bs.forEach((b, i) => {
    const [x, y] = px(b);
    g.fillStyle = uc.has(i) ? "#d33" : dj.has(i) ? "#36c" : "#999";
    g.fillRect(x - 3, y - 3, 6, 6);
    if (uc.has(i) && dj.has(i)) {
      g.strokeStyle = "#36c";
      g.strokeRect(x - 5, y - 5, 10, 10);
    }
  });
  g.fillStyle = "#000";
  g.beginPath();
  g.arc(cv.width / 2, cv.height / 2, 4, 0, 2 * Math.PI);
  g.fill();
}

function drawProfile(series) {
  const cv = $("profile");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const pad = 30;
  const all = series.flatMap((s) => s.points);
  const dMax = Math.max(...all.map((p) => p[0]));
  const cMax = Math.max(...all.map((p) => p[1])) * 1.1;
  const px = ([d, c]) => [pad + (d / dMax) * (cv.width - 2 * pad), cv.height - pad - (c / cMax) * (cv.height - 2 * pad)];
  g.strokeStyle = "#888";
  g.strokeRect(pad, pad, cv.width - 2 * pad, cv.height - 2 * pad);
  g.fillStyle = "#444";
  g.fillText("0", pad - 10, cv.height - pad + 12);
  g.fillText(`${dMax.toFixed(0)} m`, cv.width - pad - 20, cv.height - pad + 12);
  g.fillText(cMax.toFixed(2), 2, pad + 4);
  for (const s of series) {
    g.strokeStyle = s.color;
    g.beginPath();
    s.points.forEach((p, i) => (i ? g.lineTo(...px(p)) : g.moveTo(...px(p))));
    g.stroke();
    const last = px(s.points[s.points.length - 1]);
    g.fillStyle = s.color;
    g.fillText(s.name, last[0] - 20, last[1] - 6);
  }
}

function computeRates() {
  const { bbar } = inputs();
  const table = $("rates");
  while (table.rows.length > 1) table.deleteRow(1);
  for (const scheme of ["user-centric", "disjoint"]) {
    const row = table.insertRow();
    row.insertCell().textContent = scheme;
    for (const dir of ["UL", "DL"]) row.insertCell().textContent = rate(bbar, scheme, dir).toFixed(3);
  }
  const series = [
    { name: "UL", color: "#2a2", points: [] },
    { name: "DL", color: "#a2a", points: [] },
  ];
  for (const s of series) {
    const flat = profile(bbar, s.name, PROFILE_NODES);
    for (let i = 0; i < flat.length; i += 3) s.points.push([flat[i], flat[i + 2]]);
  }
  drawProfile(series);
}

function guarded(f) {
  return () => {
    try {
      showError(null);
      f();
    } catch (e) {
      showError(e);
    }
  };
}

await init();
$("resample").addEventListener("click", guarded(() => {
  $("seed").value = Number($("seed").value) + 1;
  drawLayout();
}));
// the rate integrals take several seconds; let the status text paint first
$("compute").addEventListener("click", () => {
  $("status").textContent = "computing…";
  setTimeout(() => {
    guarded(computeRates)();
    $("status").textContent = "";
  }, 20);
});
$("bbar").addEventListener("change", guarded(drawLayout));
$("seed").addEventListener("change", guarded(drawLayout));
guarded(drawLayout)();
