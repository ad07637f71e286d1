// Client-side mirrors of the service payloads. The console never computes
// pairings, scores, or tiebreaks itself; every displayed number arrives
// in one of these shapes from the API.

export type SystemName = "dutch" | "burstein" | "monrad" | "random" | "random2";

export type RoundState = "not_started" | "paired" | "complete";

export type ResultValue = "white" | "draw" | "black";

export interface PlayerEntry {
  id: string;
  name: string;
  elo: number;
  lotOrder: number | null;
}

export interface MatchRecordDoc {
  round: number;
  kind: "game" | "bye";
  white?: string;
  black?: string;
  result?: ResultValue;
  player?: string;
}

export interface TournamentDoc {
  id: string;
  name: string;
  createdAt: string;
  system: SystemName;
  beta: number;
  players: PlayerEntry[];
  history: MatchRecordDoc[];
  roundState: RoundState;
  currentRound: number;
  pairing: PairingPayload | null;
  results: (ResultValue | null)[];
}

export interface BoardPayload {
  board: number;
  white: string;
  black: string;
  float: boolean;
}

export interface PairingPayload {
  round: number;
  boards: BoardPayload[];
  bye: string | null;
  fallbackUsed: boolean;
}

export interface StandingRow {
  rank: number;
  id: string;
  name: string;
  elo: number;
  score: number;
  colorDiff: number;
  buchholz: number;
  gamesPlayed: number;
  byeReceived: boolean;
}

export interface StandingsPayload {
  roundsPlayed: number;
  standings: StandingRow[];
}

export interface TournamentSummary {
  id: string;
  name: string;
  createdAt: string;
  system: SystemName;
  players: number;
  roundState: RoundState;
  currentRound: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
