import init, {
  case_labels,
  construct_case,
  verify_manifest,
  residual_field,
} from "./pkg/fermat_demo.js";

const $ = (id) => document.getElementById(id);
const GRID = 64;

function show(id, f) {
  try {
    $(id).textContent = f();
  } catch (e) {
    $(id).textContent = "error: " + e;
  }
}

function construct() {
  try {
    $("manifest").value = construct_case($("label").value, Number($("seed").value) >>> 0);
    show("report", () => verify_manifest($("manifest").value));
    plot();
  } catch (e) {
    $("report").textContent = "error: " + e;
  }
}

function plot() {
  let values;
  try {
    values = residual_field(
      $("manifest").value,
      Number($("equation").value),
      GRID,
      Number($("radius").value),
    );
  } catch (e) {
    $("range").textContent = "error: " + e;
    return;
  }
  const finite = values.filter(Number.isFinite);
  const lo = Math.min(...finite, -16);
  const hi = Math.max(...finite, lo + 1);
  $("range").textContent = `log10 residual in [${lo.toFixed(1)}, ${hi.toFixed(1)}]`;

  const ctx = $("field").getContext("2d");
  const img = ctx.createImageData(GRID, GRID);
  values.forEach((v, i) => {
    const p = 4 * i;
    if (!Number.isFinite(v)) {
      img.data.set([128, 128, 128, 255], p);
      return;
    }
    const t = (v - lo) / (hi - lo);
    img.data.set([255 * t, 80 * (1 - t), 255 * (1 - t) * 0.6, 255], p);
  });
  ctx.putImageData(img, 0, 0);
}

await init();
for (const l of case_labels().split(" ")) {
  $("label").add(new Option(l, l));
}
$("construct").onclick = construct;
$("verify").onclick = () => show("report", () => verify_manifest($("manifest").value));
$("plot").onclick = plot;
construct();
