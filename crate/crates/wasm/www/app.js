import init, { homology, bracket, family_list } from "./pkg/kh_wasm.js";

const $ = (id) => document.getElementById(id);

function groupText(g) {
  const parts = [];
  if (g.free_rank === 1) parts.push("Z");
  if (g.free_rank > 1) parts.push(`Z^${g.free_rank}`);
  const counts = new Map();
  for (const t of g.torsion) counts.set(t, (counts.get(t) || 0) + 1);
  for (const [t, k] of counts) parts.push(k === 1 ? `Z_${t}` : `Z_${t}^${k}`);
  return parts.join("+");
}

function renderGrid(result) {
  const [x, y] = result.mode === "framed" ? ["a", "b"] : ["i", "j"];
  const cells = new Map(result.groups.map((g) => [`${g.i},${g.j}`, g]));
  const xs = [...new Set(result.groups.map((g) => g.i))].sort((p, q) => p - q);
  const ys = [...new Set(result.groups.map((g) => g.j))].sort((p, q) => q - p);
  const table = document.createElement("table");
  table.className = "grid";
  const head = table.insertRow();
  head.appendChild(Object.assign(document.createElement("th"), { textContent: `${y} \\ ${x}` }));
  for (const i of xs) head.appendChild(Object.assign(document.createElement("th"), { textContent: i }));
  for (const j of ys) {
    const row = table.insertRow();
    row.appendChild(Object.assign(document.createElement("th"), { textContent: j }));
    for (const i of xs) {
      const td = row.insertCell();
      const g = cells.get(`${i},${j}`);
      if (g) {
        td.textContent = groupText(g);
        if (g.torsion.length) td.className = "torsion";
      }
    }
  }
  $("grid").replaceChildren(table);
}

function run() {
  const expr = $("expr").value;
  const mode = document.querySelector("input[name=mode]:checked").value;
  $("error").textContent = "";
  try {
    const result = JSON.parse(homology(expr, mode));
    $("summary").textContent =
      `${result.braid.length} crossings on ${result.strands} strands, writhe ${result.writhe}, ` +
      `${result.components} component(s)`;
    renderGrid(result);
    $("bracket").textContent = bracket(expr);
  } catch (e) {
    $("summary").textContent = "";
    $("grid").replaceChildren();
    $("bracket").textContent = "";
    $("error").textContent = String(e);
  }
}

function listFamilies() {
  const table = $("families");
  const head = table.insertRow();
  for (const h of ["name", "strands", "crossings", "components", "summary"]) {
    head.appendChild(Object.assign(document.createElement("th"), { textContent: h }));
  }
  for (const f of JSON.parse(family_list())) {
    const row = table.insertRow();
    for (const v of [f.name, f.strands, f.crossings, f.components, f.summary]) row.insertCell().textContent = v;
    row.addEventListener("click", () => {
      $("expr").value = f.name;
      run();
    });
  }
}

await init();
$("form").addEventListener("submit", (e) => {
  e.preventDefault();
  run();
});
listFamilies();
run();
