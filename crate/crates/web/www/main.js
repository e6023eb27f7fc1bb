import init, { twoByTwo, signEnumeration, witnessSeries } from "./pkg/schurlab_web.js";

const $ = (id) => document.getElementById(id);

function call(fn, ...args) {
  try {
    return { value: JSON.parse(fn(...args)) };
  } catch (e) {
    return { error: String(e) };
  }
}

function complex([re, im]) {
  const r = Number(re.toPrecision(6));
  const i = Number(im.toPrecision(6));
  if (i === 0) return `${r}`;
  if (r === 0) return `${i}i`;
  return `${r}${i < 0 ? "-" : "+"}${Math.abs(i)}i`;
}

function renderTwoByTwo() {
  const out = $("z-out");
  const r = call(twoByTwo, Number($("z-re").value), Number($("z-im").value));
  out.className = r.error ? "error" : "";
  if (r.error) {
    out.textContent = r.error;
    return;
  }
  const v = r.value;
  const rows = v.matrix.map((row) => row.map(complex).join("   ")).join("\n");
  out.textContent =
    `A =\n${rows}\n\n` +
    `operator norm        ${v.operator_norm.toPrecision(12)}\n` +
    `sqrt(|z|^-2+2+|z|^2) ${v.closed_form.toPrecision(12)}\n` +
    `norm of S_A          ${v.schur_map_norm.toPrecision(12)}\n` +
    `multiplicative       ${v.multiplicative ? "yes" : "no"}\n` +
    `*-preserving         ${v.star_preserving ? "yes" : "no"}`;
}

function renderEnumeration() {
  const table = $("enum-table");
  const summary = $("enum-summary");
  table.replaceChildren();
  const r = call(signEnumeration, Number($("enum-n").value));
  summary.className = r.error ? "error" : "";
  if (r.error) {
    summary.textContent = r.error;
    return;
  }
  const v = r.value;
  summary.textContent =
    `${v.count} matrices (2^${v.n - 1}), listed by first row s; a_ij = s_i s_j. ` +
    `All rank-one correlation matrices: ${v.all_extreme ? "yes" : "no"}.`;
  for (const row of v.first_rows) {
    const tr = document.createElement("tr");
    for (const s of row) {
      const td = document.createElement("td");
      td.textContent = s > 0 ? "+1" : "-1";
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
}

function renderWitness() {
  const canvas = $("w-plot");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const r = call(witnessSeries, Number($("w-theta").value), Number($("w-n").value));
  if (r.error) {
    ctx.fillStyle = "#b00";
    ctx.fillText(r.error, 10, 20);
    return;
  }
  const points = r.value;
  const maxN = points[points.length - 1].n;
  const top = Math.max(...points.map((p) => p.lower_bound));
  const pad = 30;
  const x = (n) => pad + ((canvas.width - 2 * pad) * (n - 1)) / Math.max(maxN - 1, 1);
  const y = (v) => canvas.height - pad - ((canvas.height - 2 * pad) * v) / top;
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, canvas.height - pad);
  ctx.lineTo(canvas.width - pad, canvas.height - pad);
  ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.fillText(`n = ${maxN}`, canvas.width - pad - 30, canvas.height - 10);
  ctx.fillText(`${top.toFixed(1)}`, 2, pad);
  ctx.strokeStyle = "#1565c0";
  ctx.beginPath();
  points.forEach((p, k) => (k === 0 ? ctx.moveTo(x(p.n), y(p.lower_bound)) : ctx.lineTo(x(p.n), y(p.lower_bound))));
  ctx.stroke();
}

await init();
for (const id of ["z-re", "z-im"]) $(id).addEventListener("input", renderTwoByTwo);
$("enum-n").addEventListener("input", renderEnumeration);
for (const id of ["w-theta", "w-n"]) $(id).addEventListener("input", renderWitness);
renderTwoByTwo();
renderEnumeration();
renderWitness();
