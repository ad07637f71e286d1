// Console wiring: setup form, round board, standings, what-if panel.
// A periodic refetch keeps the view consistent if the server state moves.

import { ApiClient } from "./api";
import { ConsoleStore } from "./state";
import {
  el,
  renderBanner,
  renderBoard,
  renderRoster,
  renderStandings,
  renderWhatIf,
} from "./views";
import type { SystemName } from "./types";

const SYSTEMS: SystemName[] = ["dutch", "burstein", "monrad", "random", "random2"];

export function mountConsole(
  root: HTMLElement,
  api: ApiClient = new ApiClient(),
  refreshMs = 5000,
): { store: ConsoleStore; stop: () => void } {
  const store = new ConsoleStore(api);

  const banner = el("div");
  const setup = el("section", "setup");
  const roster = el("section", "roster-panel");
  const board = el("section", "board-panel");
  const standings = el("section", "standings-panel");
  const whatIf = el("section", "what-if-panel");
  root.append(banner, setup, roster, board, standings, whatIf);

  // -- setup form -------------------------------------------------------
  const nameInput = el("input");
  nameInput.name = "tournament-name";
  nameInput.placeholder = "Tournament name";
  const systemSelect = el("select");
  systemSelect.name = "system";
  for (const system of SYSTEMS) {
    const option = el("option", undefined, system);
    option.value = system;
    systemSelect.appendChild(option);
  }
  const betaInput = el("input");
  betaInput.name = "beta";
  betaInput.value = "2";
  const createButton = el("button", "primary", "Create tournament");
  createButton.dataset.role = "create";

  const playersBox = el("textarea");
  playersBox.name = "players";
  playersBox.placeholder = "One player per line: Name, Elo";
  const addButton = el("button", undefined, "Add players");
  addButton.dataset.role = "add-players";

  const pairButton = el("button", "primary", "Pair next round");
  pairButton.dataset.role = "pair-round";
  const seedInput = el("input");
  seedInput.name = "pair-seed";
  seedInput.placeholder = "seed (optional)";

  setup.append(nameInput, systemSelect, betaInput, createButton,
    playersBox, addButton, seedInput, pairButton);

  // -- what-if controls -------------------------------------------------
  const whatIfSystem = el("select");
  whatIfSystem.name = "what-if-system";
  const same = el("option", undefined, "same system");
  same.value = "";
  whatIfSystem.appendChild(same);
  for (const system of SYSTEMS) {
    const option = el("option", undefined, system);
    option.value = system;
    whatIfSystem.appendChild(option);
  }
  const whatIfBeta = el("input");
  whatIfBeta.name = "what-if-beta";
  whatIfBeta.placeholder = "beta (e.g. 0.1)";
  const whatIfButton = el("button", undefined, "Preview");
  whatIfButton.dataset.role = "what-if";
  const whatIfOutput = el("div");
  whatIf.append(whatIfSystem, whatIfBeta, whatIfButton, whatIfOutput);

  createButton.addEventListener("click", async () => {
    const name = nameInput.value.trim() || "Tournament";
    const beta = Number(betaInput.value) || 2;
    await store.createTournament(
      name, systemSelect.value as SystemName, beta);
  });

  addButton.addEventListener("click", async () => {
    const entries = playersBox.value
      .split("\n")
      .map((line) => line.trim())
      .filter((line) => line.length > 0)
      .map((line) => {
        const [name, elo] = line.split(",").map((part) => part.trim());
        return { name, elo: Number(elo) || 1500 };
      });
    if (entries.length > 0 && (await store.addPlayers(entries))) {
      playersBox.value = "";
    }
  });

  pairButton.addEventListener("click", () => {
    const seed = seedInput.value.trim();
    void store.pairNextRound(seed === "" ? undefined : Number(seed));
  });

  whatIfButton.addEventListener("click", () => {
    const system = whatIfSystem.value as SystemName | "";
    const beta = whatIfBeta.value ? Number(whatIfBeta.value) : undefined;
    void store.loadWhatIf({
      system: system === "" ? undefined : system,
      beta,
    });
  });

  const render = () => {
    const state = store.snapshot();
    renderBanner(banner, state);
    renderRoster(roster, state);
    renderBoard(board, state, (boardNo, result) => {
      void store.submitResult(boardNo, result);
    });
    renderStandings(standings, state);
    renderWhatIf(whatIfOutput, state);
    pairButton.disabled = !store.canPairNextRound();
  };
  const unsubscribe = store.subscribe(render);
  render();

  const timer = setInterval(() => void store.refresh(), refreshMs);
  return {
    store,
    stop: () => {
      clearInterval(timer);
      unsubscribe();
    },
  };
}
