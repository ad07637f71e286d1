// View model: a client-side mirror of the server record plus UI status.
// The state machine tracks the service's exactly (results only for the
// open round, next round only when complete); nothing is computed locally.

import { ApiClient, ApiError, NetworkDown } from "./api";
import type {
  PairingPayload,
  ResultValue,
  StandingsPayload,
  TournamentDoc,
} from "./types";

export interface ConsoleState {
  tournament: TournamentDoc | null;
  standings: StandingsPayload | null;
  whatIf: PairingPayload | null;
  offline: boolean;
  banner: string | null;
}

type Listener = (state: ConsoleState) => void;

export class ConsoleStore {
  private state: ConsoleState = {
    tournament: null,
    standings: null,
    whatIf: null,
    offline: false,
    banner: null,
  };
  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  snapshot(): ConsoleState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ConsoleState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private async guard<T>(action: () => Promise<T>): Promise<T | null> {
    try {
      const value = await action();
      if (this.state.offline) this.update({ offline: false, banner: null });
      return value;
    } catch (err) {
      if (err instanceof NetworkDown) {
        this.update({ offline: true, banner: "API unreachable" });
      } else if (err instanceof ApiError) {
        this.update({ banner: err.message });
      } else {
        this.update({ banner: String(err) });
      }
      return null;
    }
  }

  canPairNextRound(): boolean {
    const doc = this.state.tournament;
    return (
      doc !== null &&
      doc.players.length >= 2 &&
      doc.roundState !== "paired"
    );
  }

  canEnterResults(): boolean {
    return this.state.tournament?.roundState === "paired";
  }

  async createTournament(
    name: string,
    system: TournamentDoc["system"],
    beta: number,
  ): Promise<TournamentDoc | null> {
    const doc = await this.guard(() =>
      this.api.createTournament(name, system, beta),
    );
    if (doc) this.update({ tournament: doc, standings: null, whatIf: null });
    return doc;
  }

  async open(id: string): Promise<void> {
    const doc = await this.guard(() => this.api.getTournament(id));
    if (doc) {
      this.update({ tournament: doc });
      await this.refreshStandings();
    }
  }

  async refresh(): Promise<void> {
    const id = this.state.tournament?.id;
    if (!id) return;
    const doc = await this.guard(() => this.api.getTournament(id));
    if (doc) this.update({ tournament: doc });
    await this.refreshStandings();
  }

  async refreshStandings(): Promise<void> {
    const id = this.state.tournament?.id;
    if (!id) return;
    const standings = await this.guard(() => this.api.standings(id));
    if (standings) this.update({ standings });
  }

  async addPlayers(players: { name: string; elo: number }[]): Promise<boolean> {
    const id = this.state.tournament?.id;
    if (!id) return false;
    const ok = await this.guard(() => this.api.addPlayers(id, players));
    if (ok) await this.refresh();
    return ok !== null;
  }

  async pairNextRound(seed?: number): Promise<PairingPayload | null> {
    const id = this.state.tournament?.id;
    if (!id) return null;
    const pairing = await this.guard(() => this.api.pairNextRound(id, seed));
    if (pairing) await this.refresh();
    return pairing;
  }

  /** Optimistically mark the board, roll back if the service refuses. */
  async submitResult(board: number, result: ResultValue): Promise<boolean> {
    const doc = this.state.tournament;
    if (!doc || doc.roundState !== "paired") return false;
    const previous = doc.results.slice();
    const optimistic = previous.slice();
    optimistic[board - 1] = result;
    this.update({ tournament: { ...doc, results: optimistic } });
    const updated = await this.guard(() =>
      this.api.submitResult(doc.id, doc.currentRound, board, result),
    );
    if (!updated) {
      this.update({ tournament: { ...doc, results: previous } });
      return false;
    }
    this.update({ tournament: updated });
    await this.refreshStandings();
    return true;
  }

  async loadWhatIf(options: {
    system?: TournamentDoc["system"];
    beta?: number;
  }): Promise<PairingPayload | null> {
    const id = this.state.tournament?.id;
    if (!id) return null;
    const pairing = await this.guard(() => this.api.preview(id, options));
    if (pairing) this.update({ whatIf: pairing });
    return pairing;
  }

  clearWhatIf(): void {
    this.update({ whatIf: null });
  }

  clearBanner(): void {
    this.update({ banner: null });
  }
}
