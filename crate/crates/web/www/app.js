import init, { decide_json, emptiness_table_json, closure_json } from "./pkg/adlv_web.js";

const $ = (id) => document.getElementById(id);

function rootSystem() {
  return [$("kind").value, Number($("rank").value)];
}

function fail(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  target.appendChild(p);
}

function showVerdict() {
  const out = $("verdict");
  try {
    const [kind, rank] = rootSystem();
    const doc = JSON.parse(decide_json(kind, rank, $("x").value, $("y").value, $("lambda").value));
    out.innerHTML = "";
    const h = document.createElement("h3");
    h.textContent = `${doc.status} (${doc.rule})`;
    const pre = document.createElement("pre");
    pre.textContent = JSON.stringify(doc.evidence, null, 2);
    out.append(h, pre);
  } catch (err) {
    fail(out, err);
  }
}

function showTable() {
  const out = $("table-out");
  try {
    const [kind, rank] = rootSystem();
    const doc = JSON.parse(emptiness_table_json(kind, rank, $("table-lambda").value));
    const table = document.createElement("table");
    table.className = "grid";
    const head = table.insertRow();
    head.appendChild(document.createElement("th")).textContent = "x \\ y";
    for (const y of doc.cols) head.appendChild(document.createElement("th")).textContent = y;
    doc.rows.forEach((x, i) => {
      const row = table.insertRow();
      row.appendChild(document.createElement("th")).textContent = x;
      doc.status[i].forEach((status, j) => {
        const cell = row.insertCell();
        cell.className = status;
        cell.textContent = status;
        cell.title = doc.rule[i][j];
      });
    });
    out.innerHTML = "";
    out.appendChild(table);
  } catch (err) {
    fail(out, err);
  }
}

function showClosure() {
  const out = $("closure-out");
  try {
    const [kind, rank] = rootSystem();
    const doc = JSON.parse(closure_json(kind, rank));
    const name = (i) => `(${doc.labels[i].J}, ${doc.labels[i].w})`;
    const ul = document.createElement("ul");
    for (const [i, j] of doc.hasse) {
      const li = document.createElement("li");
      li.textContent = `${name(j)} lies in the closure of ${name(i)}`;
      ul.appendChild(li);
    }
    out.innerHTML = "";
    const p = document.createElement("p");
    p.textContent = `${doc.labels.length} pieces, ${doc.hasse.length} covering relations`;
    out.append(p, ul);
  } catch (err) {
    fail(out, err);
  }
}

await init();
$("decide").addEventListener("click", showVerdict);
$("table").addEventListener("click", showTable);
$("closure").addEventListener("click", showClosure);
