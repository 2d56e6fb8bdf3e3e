/** Table inspector: rows for concrete tables, the rule plus a few sample
 * rows for virtual ones, provenance badges (check-mark, freshness fade). */

import { fadeLevel, slotLabels } from "./model.js";
import type { TableViewDoc, Value, WorkspaceDoc } from "./types.js";

export function buildTableView(
  dom: Document,
  doc: WorkspaceDoc,
  view: TableViewDoc,
  today: string,
  onSelect?: (keys: string[]) => void,
): HTMLElement {
  const root = dom.createElement("section");
  root.className = "table-view";
  root.dataset.simplex = view.simplex;

  const heading = dom.createElement("h3");
  heading.textContent = `table over ${view.simplex}`;
  if (view.provenance) {
    if (view.provenance.verified) {
      const badge = dom.createElement("span");
      badge.className = "badge verified";
      badge.textContent = "✓";
      badge.title = `verified: ${view.provenance.source}`;
      heading.appendChild(badge);
    }
    root.style.opacity = String(fadeLevel(view.provenance, today));
    const src = dom.createElement("p");
    src.className = "provenance";
    src.textContent = `${view.provenance.source} (created ${view.provenance.created_at})`;
    root.appendChild(src);
  }
  root.insertBefore(heading, root.firstChild);

  if (view.virtual) {
    const desc = dom.createElement("p");
    desc.className = "virtual-rule";
    desc.textContent = view.description ?? "computed table";
    root.appendChild(desc);
    root.appendChild(rowsTable(dom, doc, view.simplex, view.samples ?? [], null, undefined));
    const note = dom.createElement("p");
    note.className = "virtual-note";
    note.textContent = "sample rows only; this table is computed, not stored";
    root.appendChild(note);
    return root;
  }

  root.appendChild(
    rowsTable(dom, doc, view.simplex, view.rows ?? [], view.keys ?? null, onSelect),
  );
  return root;
}

function rowsTable(
  dom: Document,
  doc: WorkspaceDoc,
  simplex: string,
  rows: Value[][],
  keys: string[] | null,
  onSelect?: (keys: string[]) => void,
): HTMLElement {
  const table = dom.createElement("table");
  table.className = "rows";
  const thead = dom.createElement("thead");
  const headRow = dom.createElement("tr");
  if (keys && onSelect) headRow.appendChild(dom.createElement("th"));
  for (const label of headerLabels(doc, simplex, rows)) {
    const th = dom.createElement("th");
    th.textContent = label;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = dom.createElement("tbody");
  const chosen = new Set<string>();
  rows.forEach((row, n) => {
    const tr = dom.createElement("tr");
    if (keys && onSelect) {
      const td = dom.createElement("td");
      const box = dom.createElement("input");
      box.type = "checkbox";
      box.dataset.key = keys[n];
      box.addEventListener("change", () => {
        box.checked ? chosen.add(keys[n]) : chosen.delete(keys[n]);
        onSelect(Array.from(chosen));
      });
      td.appendChild(box);
      tr.appendChild(td);
    }
    for (const v of row) {
      const td = dom.createElement("td");
      td.textContent = String(v);
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  });
  table.appendChild(tbody);
  return table;
}

function headerLabels(doc: WorkspaceDoc, simplex: string, rows: Value[][]): string[] {
  try {
    return slotLabels(doc, simplex);
  } catch {
    const width = rows[0]?.length ?? 0;
    return Array.from({ length: width }, (_, i) => `col ${i}`);
  }
}

export function buildResultView(
  dom: Document,
  rows: Value[][],
  dedup: boolean,
): HTMLElement {
  const root = dom.createElement("section");
  root.className = "query-result";
  const heading = dom.createElement("h3");
  heading.textContent = dedup ? "query result (distinct)" : "query result";
  root.appendChild(heading);
  const table = dom.createElement("table");
  table.className = "rows result-rows";
  const tbody = dom.createElement("tbody");
  for (const row of rows) {
    const tr = dom.createElement("tr");
    for (const v of row) {
      const td = dom.createElement("td");
      td.textContent = String(v);
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  root.appendChild(table);
  return root;
}
