// DOM rendering for the arbiter console. Pure payload -> DOM; every number
// shown here came from the service.

import type { ConsoleState } from "./state";
import type { BoardPayload, PairingPayload, ResultValue } from "./types";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function renderBanner(root: HTMLElement, state: ConsoleState): void {
  clear(root);
  if (state.offline) {
    root.appendChild(el("div", "banner banner-offline",
      "API unreachable - retrying"));
  } else if (state.banner) {
    const note = el("div", "banner banner-error", state.banner);
    note.dataset.role = "error-banner";
    root.appendChild(note);
  }
}

export function renderRoster(root: HTMLElement, state: ConsoleState): void {
  clear(root);
  const doc = state.tournament;
  if (!doc) return;
  const heading = el("h2", undefined,
    `${doc.name} - ${doc.system}, beta ${doc.beta}`);
  root.appendChild(heading);
  const list = el("table", "roster");
  list.dataset.role = "roster";
  const head = el("tr");
  for (const column of ["#", "Name", "Elo"]) {
    head.appendChild(el("th", undefined, column));
  }
  list.appendChild(head);
  doc.players.forEach((player, i) => {
    const row = el("tr");
    row.appendChild(el("td", undefined, String(i + 1)));
    row.appendChild(el("td", undefined, player.name));
    row.appendChild(el("td", undefined, String(player.elo)));
    list.appendChild(row);
  });
  root.appendChild(list);
}

function describeResult(value: ResultValue): string {
  return value === "white" ? "1-0" : value === "black" ? "0-1" : "1/2";
}

export function renderBoard(
  root: HTMLElement,
  state: ConsoleState,
  onResult: (board: number, result: ResultValue) => void,
): void {
  clear(root);
  const doc = state.tournament;
  if (!doc) return;
  if (doc.roundState !== "paired" || !doc.pairing) {
    root.appendChild(el("p", "hint",
      doc.roundState === "complete"
        ? `Round ${doc.currentRound} complete.`
        : "No round paired yet."));
    return;
  }
  root.appendChild(el("h2", undefined, `Round ${doc.pairing.round}`));
  if (doc.pairing.fallbackUsed) {
    root.appendChild(el("p", "warning",
      "Color condition relaxed this round."));
  }
  const table = el("table", "boards");
  table.dataset.role = "round-board";
  doc.pairing.boards.forEach((board: BoardPayload) => {
    const row = el("tr");
    row.dataset.board = String(board.board);
    row.appendChild(el("td", "board-no", String(board.board)));
    const white = el("td", "white", board.white);
    const black = el("td", "black", board.black);
    row.appendChild(white);
    row.appendChild(black);
    if (board.float) {
      const badge = el("td", "float-badge", "float");
      badge.dataset.role = "float-badge";
      row.appendChild(badge);
    } else {
      row.appendChild(el("td"));
    }
    const entered = doc.results[board.board - 1];
    const cell = el("td", "result-cell");
    if (entered) {
      cell.textContent = describeResult(entered);
      cell.dataset.entered = entered;
    } else {
      for (const value of ["white", "draw", "black"] as ResultValue[]) {
        const button = el("button", "result", describeResult(value));
        button.dataset.result = value;
        button.addEventListener("click", () =>
          onResult(board.board, value));
        cell.appendChild(button);
      }
    }
    row.appendChild(cell);
    table.appendChild(row);
  });
  root.appendChild(table);
  if (doc.pairing.bye) {
    const bye = el("p", "bye", `Bye: ${doc.pairing.bye}`);
    bye.dataset.role = "bye";
    root.appendChild(bye);
  }
}

export function renderStandings(root: HTMLElement, state: ConsoleState): void {
  clear(root);
  const standings = state.standings;
  if (!standings || standings.standings.length === 0) return;
  root.appendChild(el("h2", undefined,
    `Standings after round ${standings.roundsPlayed}`));
  const table = el("table", "standings");
  table.dataset.role = "standings";
  const head = el("tr");
  for (const column of ["#", "Name", "Elo", "Score", "cd", "Buchholz"]) {
    head.appendChild(el("th", undefined, column));
  }
  table.appendChild(head);
  for (const row of standings.standings) {
    const tr = el("tr");
    tr.dataset.player = row.id;
    tr.appendChild(el("td", undefined, String(row.rank)));
    tr.appendChild(el("td", undefined, row.name));
    tr.appendChild(el("td", undefined, String(row.elo)));
    const score = el("td", "score", String(row.score));
    score.dataset.role = "score";
    tr.appendChild(score);
    tr.appendChild(el("td", undefined, String(row.colorDiff)));
    tr.appendChild(el("td", undefined, String(row.buchholz)));
    table.appendChild(tr);
  }
  root.appendChild(table);
}

export function renderWhatIf(
  root: HTMLElement,
  state: ConsoleState,
): void {
  clear(root);
  const preview = state.whatIf;
  const committed = state.tournament?.pairing ?? null;
  if (!preview) return;
  root.appendChild(el("h3", undefined, "What-if preview"));
  const wrap = el("div", "what-if-columns");
  wrap.appendChild(pairingColumn("Committed", committed));
  wrap.appendChild(pairingColumn("Preview", preview, "what-if-preview"));
  root.appendChild(wrap);
}

function pairingColumn(
  title: string,
  pairing: PairingPayload | null,
  role?: string,
): HTMLElement {
  const column = el("div", "what-if-column");
  if (role) column.dataset.role = role;
  column.appendChild(el("h4", undefined, title));
  if (!pairing) {
    column.appendChild(el("p", "hint", "none"));
    return column;
  }
  const list = el("ul");
  for (const board of pairing.boards) {
    const item = el("li", undefined,
      `${board.white} - ${board.black}${board.float ? " (float)" : ""}`);
    item.dataset.white = board.white;
    item.dataset.black = board.black;
    list.appendChild(item);
  }
  column.appendChild(list);
  if (pairing.bye) column.appendChild(el("p", "bye", `Bye: ${pairing.bye}`));
  return column;
}
