// Thin typed client over fetch. All tournament knowledge lives server-side;
// this module only moves JSON.

import type {
  PairingPayload,
  StandingsPayload,
  SystemName,
  TournamentDoc,
  TournamentSummary,
  ResultValue,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class NetworkDown extends Error {}

async function request<T>(
  base: string,
  path: string,
  init?: RequestInit,
): Promise<T> {
  let response: Response;
  try {
    response = await fetch(base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
  } catch (err) {
    throw new NetworkDown(String(err));
  }
  if (!response.ok) {
    let code = "error";
    let message = `${response.status}`;
    try {
      const body = await response.json();
      code = body.code ?? code;
      message = body.message ?? message;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  health(): Promise<{ status: string }> {
    return request(this.base, "/healthz");
  }

  listTournaments(): Promise<TournamentSummary[]> {
    return request(this.base, "/api/tournaments");
  }

  createTournament(
    name: string,
    system: SystemName,
    beta: number,
  ): Promise<TournamentDoc> {
    return request(this.base, "/api/tournaments", {
      method: "POST",
      body: JSON.stringify({ name, system, beta }),
    });
  }

  getTournament(id: string): Promise<TournamentDoc> {
    return request(this.base, `/api/tournaments/${id}`);
  }

  addPlayers(
    id: string,
    players: { name: string; elo: number }[],
  ): Promise<{ players: TournamentDoc["players"] }> {
    return request(this.base, `/api/tournaments/${id}/players`, {
      method: "POST",
      body: JSON.stringify(players),
    });
  }

  pairNextRound(id: string, seed?: number): Promise<PairingPayload> {
    return request(this.base, `/api/tournaments/${id}/rounds`, {
      method: "POST",
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
  }

  submitResult(
    id: string,
    round: number,
    board: number,
    result: ResultValue,
  ): Promise<TournamentDoc> {
    return request(this.base, `/api/tournaments/${id}/rounds/${round}/results`, {
      method: "PUT",
      body: JSON.stringify({ board, result }),
    });
  }

  standings(id: string): Promise<StandingsPayload> {
    return request(this.base, `/api/tournaments/${id}/standings`);
  }

  preview(
    id: string,
    options: { system?: SystemName; beta?: number; seed?: number } = {},
  ): Promise<PairingPayload> {
    const params = new URLSearchParams();
    if (options.system) params.set("system", options.system);
    if (options.beta !== undefined) params.set("beta", String(options.beta));
    if (options.seed !== undefined) params.set("seed", String(options.seed));
    const query = params.toString();
    return request(
      this.base,
      `/api/tournaments/${id}/preview${query ? `?${query}` : ""}`,
    );
  }
}
