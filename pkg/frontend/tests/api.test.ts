import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, NetworkDown } from "../src/api";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("ApiClient", () => {
  it("creates tournaments with the documented body", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ id: "abc" }, 201));
    const client = new ApiClient("http://host");
    await client.createTournament("Club", "burstein", 2);
    expect(fetchMock).toHaveBeenCalledWith(
      "http://host/api/tournaments",
      expect.objectContaining({
        method: "POST",
        body: JSON.stringify({ name: "Club", system: "burstein", beta: 2 }),
      }),
    );
  });

  it("builds preview query parameters", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ round: 1, boards: [], bye: null }));
    const client = new ApiClient();
    await client.preview("t1", { system: "dutch", beta: 0.1, seed: 5 });
    expect(fetchMock).toHaveBeenCalledWith(
      "/api/tournaments/t1/preview?system=dutch&beta=0.1&seed=5",
      expect.anything(),
    );
  });

  it("submits results to the round endpoint", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ id: "t1" }));
    await new ApiClient().submitResult("t1", 3, 2, "draw");
    expect(fetchMock).toHaveBeenCalledWith(
      "/api/tournaments/t1/rounds/3/results",
      expect.objectContaining({
        method: "PUT",
        body: JSON.stringify({ board: 2, result: "draw" }),
      }),
    );
  });

  it("raises ApiError with the service's code and message", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse({ code: "conflict", message: "round open" }, 409),
    );
    const error = await new ApiClient()
      .pairNextRound("t1")
      .catch((err) => err);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(409);
    expect(error.code).toBe("conflict");
  });

  it("raises NetworkDown when fetch itself fails", async () => {
    vi.spyOn(globalThis, "fetch").mockRejectedValue(new TypeError("offline"));
    const error = await new ApiClient().health().catch((err) => err);
    expect(error).toBeInstanceOf(NetworkDown);
  });
});
