import { describe, expect, it } from "vitest";
import { OfflineQueue, QueuedJob, StorageLike } from "../src/offlineQueue.js";

class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();
  getItem(key: string) {
    return this.data.get(key) ?? null;
  }
  setItem(key: string, value: string) {
    this.data.set(key, value);
  }
}

describe("offline queue", () => {
  it("persists queued jobs to storage", () => {
    const storage = new MemoryStorage();
    const queue = new OfflineQueue(storage, async () => undefined);
    queue.enqueue("upvote", { reply_id: "r1" });
    expect(queue.length).toBe(1);
    // a fresh queue over the same storage sees the job (survives reload)
    const reloaded = new OfflineQueue(storage, async () => undefined);
    expect(reloaded.length).toBe(1);
    expect(reloaded.peek()[0].kind).toBe("upvote");
  });

  it("flush sends jobs in order and clears them", async () => {
    const storage = new MemoryStorage();
    const sent: string[] = [];
    const queue = new OfflineQueue(storage, async (job: QueuedJob) => {
      sent.push(job.kind);
    });
    queue.enqueue("forum_post", { title: "a" });
    queue.enqueue("forum_reply", { body: "b" });
    const n = await queue.flush();
    expect(n).toBe(2);
    expect(sent).toEqual(["forum_post", "forum_reply"]);
    expect(queue.length).toBe(0);
  });

  it("server failure keeps the job and preserves order", async () => {
    const storage = new MemoryStorage();
    let failFirst = true;
    const sent: string[] = [];
    const queue = new OfflineQueue(storage, async (job: QueuedJob) => {
      if (failFirst && job.kind === "forum_post") throw new Error("offline");
      sent.push(job.kind);
    });
    queue.enqueue("forum_post", { title: "a" });
    queue.enqueue("upvote", { reply_id: "r1" });
    expect(await queue.flush()).toBe(0);
    expect(queue.length).toBe(2); // later writes wait behind the failed one
    failFirst = false;
    expect(await queue.flush()).toBe(2);
    expect(sent).toEqual(["forum_post", "upvote"]);
  });

  it("tolerates corrupted storage", () => {
    const storage = new MemoryStorage();
    storage.setItem("devicedesk_offline_queue_v1", "{not json");
    const queue = new OfflineQueue(storage, async () => undefined);
    expect(queue.length).toBe(0);
    queue.enqueue("upvote", { reply_id: "r1" });
    expect(queue.length).toBe(1);
  });

  it("offline send failure leaves retry queue length 1", async () => {
    const storage = new MemoryStorage();
    const queue = new OfflineQueue(storage, async () => {
      throw new TypeError("fetch failed");
    });
    queue.enqueue("forum_post", { title: "t" });
    await queue.flush();
    expect(queue.length).toBe(1);
  });
});
