// Persistent retry queue for failed writes: clinics lose connectivity, the
// console should not lose forum posts or votes. Storage and the sender are
// injected so the logic is testable in node.

export interface QueuedJob {
  id: string;
  kind: string;
  payload: Record<string, unknown>;
  queued_at: number;
}

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export type JobSender = (job: QueuedJob) => Promise<void>;

const KEY = "devicedesk_offline_queue_v1";

export class OfflineQueue {
  private flushing = false;

  constructor(
    private storage: StorageLike,
    private send: JobSender,
    private now: () => number = () => Date.now(),
  ) {}

  private load(): QueuedJob[] {
    try {
      return JSON.parse(this.storage.getItem(KEY) ?? "[]");
    } catch {
      return [];
    }
  }

  private save(jobs: QueuedJob[]) {
    this.storage.setItem(KEY, JSON.stringify(jobs));
  }

  get length(): number {
    return this.load().length;
  }

  peek(): QueuedJob[] {
    return this.load();
  }

  enqueue(kind: string, payload: Record<string, unknown>): QueuedJob {
    const job: QueuedJob = {
      id: `${this.now().toString(36)}-${Math.random().toString(36).slice(2, 8)}`,
      kind,
      payload,
      queued_at: this.now(),
    };
    const jobs = this.load();
    jobs.push(job);
    this.save(jobs);
    return job;
  }

  /** Retry everything in order; jobs that still fail stay queued (order
   * preserved — later writes may depend on earlier ones). Returns the number
   * of jobs that went through. */
  async flush(): Promise<number> {
    if (this.flushing) return 0;
    this.flushing = true;
    try {
      const jobs = this.load();
      const remaining: QueuedJob[] = [];
      let sent = 0;
      let blocked = false;
      for (const job of jobs) {
        if (blocked) {
          remaining.push(job);
          continue;
        }
        try {
          await this.send(job);
          sent += 1;
        } catch {
          remaining.push(job);
          blocked = true; // keep ordering: stop retrying the rest this round
        }
      }
      this.save(remaining);
      return sent;
    } finally {
      this.flushing = false;
    }
  }
}
