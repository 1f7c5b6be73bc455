// DOM wiring for the technician console. All behavior that matters lives in
// the tested modules (api, chat, wizard, votes, offlineQueue); this file
// only renders state and forwards events.

import { ApiFailure, DeviceDeskApi } from "./api.js";
import { ChatMessage, toChatMessage, toggleCitation, userMessage, validateInput } from "./chat.js";
import { OfflineQueue, QueuedJob } from "./offlineQueue.js";
import { IDLE, WizardState, applySnapshot, forgetSession, progressLabel, recallSession, rememberSession } from "./wizard.js";
import { VoteState, optimisticUpvote, reconcileFailure, reconcileSuccess } from "./votes.js";
import type { ForumReply } from "./types.js";

const api = new DeviceDeskApi();
const $ = <T extends HTMLElement>(sel: string) => document.querySelector(sel) as T;

// ---------------------------------------------------------------------------
// offline banner + retry queue
// ---------------------------------------------------------------------------

const queue = new OfflineQueue(window.localStorage, async (job: QueuedJob) => {
  if (job.kind === "forum_post") {
    const p = job.payload as { title: string; body: string; device_model: string };
    await api.forumCreatePost(p.title, p.body, p.device_model);
  } else if (job.kind === "forum_reply") {
    const p = job.payload as { post_id: string; body: string };
    await api.forumReply(p.post_id, p.body);
  } else if (job.kind === "upvote") {
    await api.forumUpvote((job.payload as { reply_id: string }).reply_id);
  } else if (job.kind === "feedback") {
    const p = job.payload as { target: string; verdict: "correct" | "incorrect" };
    await api.feedback(p.target, p.verdict);
  }
});

function refreshBanner() {
  const banner = $("#offline-banner");
  const n = queue.length;
  if (!navigator.onLine || n > 0) {
    banner.hidden = false;
    banner.textContent = navigator.onLine
      ? `reconnected — retrying ${n} queued change${n === 1 ? "" : "s"}…`
      : `offline — ${n} change${n === 1 ? "" : "s"} queued for retry`;
  } else {
    banner.hidden = true;
  }
}

async function flushQueue() {
  await queue.flush();
  refreshBanner();
  if (queue.length === 0 && currentPostId) void openPost(currentPostId);
}

window.addEventListener("online", () => void flushQueue());
window.addEventListener("offline", refreshBanner);

function isNetworkError(err: unknown): boolean {
  return err instanceof TypeError || (err instanceof ApiFailure && err.status >= 502);
}

// ---------------------------------------------------------------------------
// chat
// ---------------------------------------------------------------------------

let messages: ChatMessage[] = [];
let sessionId: string | undefined;

function renderChat() {
  const list = $("#chat-messages");
  list.innerHTML = "";
  for (const [idx, msg] of messages.entries()) {
    const div = document.createElement("div");
    div.className = `msg ${msg.direction}` + (!msg.grounded && msg.direction === "assistant" ? " refusal" : "");
    const text = document.createElement("p");
    text.textContent = msg.text;
    div.appendChild(text);
    if (msg.flags.includes("untranslated")) {
      const note = document.createElement("small");
      note.textContent = "(shown untranslated)";
      div.appendChild(note);
    }
    if (msg.flags.includes("low_confidence")) {
      const note = document.createElement("small");
      note.textContent = "(low confidence — best effort)";
      div.appendChild(note);
    }
    for (const panel of msg.citations) {
      const btn = document.createElement("button");
      btn.className = "citation";
      btn.textContent = (panel.expanded ? "▾ " : "▸ ") + panel.chunk_id;
      btn.onclick = () => {
        messages[idx] = toggleCitation(messages[idx], panel.chunk_id);
        renderChat();
      };
      div.appendChild(btn);
      if (panel.expanded) {
        const source = document.createElement("pre");
        source.className = "citation-body";
        source.textContent = `source chunk: ${panel.chunk_id}`;
        div.appendChild(source);
      }
    }
    if (msg.direction === "assistant" && msg.answer_id) {
      const fb = document.createElement("span");
      fb.className = "feedback";
      for (const verdict of ["correct", "incorrect"] as const) {
        const b = document.createElement("button");
        b.textContent = verdict === "correct" ? "👍" : "👎";
        b.onclick = () => void sendFeedback(msg.answer_id!, verdict);
        fb.appendChild(b);
      }
      div.appendChild(fb);
    }
    list.appendChild(div);
  }
  list.scrollTop = list.scrollHeight;
}

async function sendFeedback(target: string, verdict: "correct" | "incorrect") {
  try {
    await api.feedback(target, verdict);
  } catch (err) {
    if (isNetworkError(err)) {
      queue.enqueue("feedback", { target, verdict });
      refreshBanner();
    }
  }
}

async function sendChat() {
  const input = $("#chat-input") as unknown as HTMLInputElement;
  const text = validateInput(input.value);
  if (!text) return;
  input.value = "";
  messages.push(userMessage(text));
  renderChat();
  const language = ($("#language-select") as unknown as HTMLSelectElement).value || undefined;
  try {
    const answer = await api.query(text, { language, session_id: sessionId });
    sessionId = answer.session_id;
    messages.push(toChatMessage(answer));
  } catch (err) {
    if (isNetworkError(err)) {
      messages.push({
        direction: "assistant", text: "offline — will answer when the server is reachable",
        citations: [], grounded: false, language: "", flags: ["offline"],
      });
      refreshBanner();
    } else if (err instanceof ApiFailure) {
      messages.push({
        direction: "assistant", text: `${err.code}: ${err.message}`,
        citations: [], grounded: false, language: "", flags: ["error"],
      });
    }
  }
  renderChat();
}

// ---------------------------------------------------------------------------
// error-code quick lookup
// ---------------------------------------------------------------------------

async function lookupCode() {
  const code = ($("#code-input") as unknown as HTMLInputElement).value.trim();
  if (!code) return;
  const out = $("#code-result");
  try {
    const answer = await api.errorCode(code);
    if (answer.status === "exact" && answer.entry) {
      out.innerHTML = `<h3>${answer.entry.code}</h3><p>${answer.entry.description}</p>` +
        (answer.entry.corrective_actions.length
          ? `<ol>${answer.entry.corrective_actions.map((a) => `<li>${a}</li>`).join("")}</ol>`
          : "");
    } else if (answer.status === "disambiguation") {
      out.innerHTML = `<p>No exact match. Did you mean:</p><ul>${(answer.suggestions ?? [])
        .map((s) => `<li><b>${s.code}</b> — ${s.description}</li>`).join("")}</ul>`;
    } else {
      out.textContent = `No catalog entry for ${answer.query_code}.`;
    }
  } catch (err) {
    out.textContent = err instanceof ApiFailure ? `${err.code}: ${err.message}` : "offline";
  }
}

// ---------------------------------------------------------------------------
// log upload
// ---------------------------------------------------------------------------

async function uploadLog() {
  const input = $("#log-file") as unknown as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  const out = $("#log-result");
  out.textContent = "analyzing…";
  try {
    const report = await api.analyzeLog(file, file.name);
    const sev = Object.entries(report.counts_by_severity)
      .map(([s, n]) => `<li>${s}: ${n}</li>`).join("");
    const codes = report.top_codes.slice(0, 10)
      .map((c) => `<li><b>${c.code}</b> ×${c.count}${c.catalog_match ? " (in catalog)" : ""}</li>`)
      .join("");
    out.innerHTML =
      `<p>${report.parsed} of ${report.total_lines} lines parsed, ` +
      `${report.malformed_lines.length} malformed.</p>` +
      `<h4>Severities</h4><ul>${sev}</ul><h4>Top codes</h4><ul>${codes || "<li>none</li>"}</ul>`;
  } catch (err) {
    out.textContent = err instanceof ApiFailure ? `${err.code}: ${err.message}` : "offline";
  }
}

// ---------------------------------------------------------------------------
// self-test wizard
// ---------------------------------------------------------------------------

let wizard: WizardState = IDLE;

function renderWizard() {
  $("#wizard-progress").textContent = progressLabel(wizard);
  const stepBox = $("#wizard-step");
  const buttons = $("#wizard-buttons");
  const reportBox = $("#wizard-report");
  if (wizard.state === "in_progress" && wizard.currentStep) {
    stepBox.innerHTML =
      `<h3>${wizard.currentStep.step_id}</h3><p>${wizard.currentStep.instruction}</p>` +
      `<p><i>expected: ${wizard.currentStep.expected}</i></p>`;
    buttons.hidden = false;
    reportBox.hidden = true;
  } else if (wizard.state === "complete" && wizard.report) {
    stepBox.innerHTML = "<h3>Self-test complete</h3>";
    buttons.hidden = true;
    const counts = wizard.report.counts;
    reportBox.hidden = false;
    reportBox.innerHTML =
      `<p>pass ${counts.pass} · fail ${counts.fail} · skipped ${counts.skipped}</p>` +
      `<ol>${wizard.report.trace.map((t) => `<li>[${t.result ?? "-"}] ${t.instruction}</li>`).join("")}</ol>`;
  } else {
    stepBox.textContent = "";
    buttons.hidden = true;
    reportBox.hidden = true;
  }
}

async function startWizard() {
  const model = ($("#wizard-model") as unknown as HTMLInputElement).value.trim();
  if (!model) return;
  try {
    const snap = await api.selftestStart(model);
    wizard = applySnapshot(IDLE, snap);
    rememberSession(window.localStorage, snap.session_id);
  } catch (err) {
    $("#wizard-step").textContent =
      err instanceof ApiFailure ? `${err.code}: ${err.message}` : "offline";
    wizard = IDLE;
  }
  renderWizard();
}

async function advanceWizard(result: "pass" | "fail" | "skipped") {
  const sid = wizard.sessionId;
  if (!sid) return;
  try {
    const snap = await api.selftestAdvance(sid, result);
    wizard = applySnapshot(wizard, snap);
    if (wizard.state === "complete") forgetSession(window.localStorage);
  } catch (err) {
    if (err instanceof ApiFailure && err.code === "SessionComplete") {
      const snap = await api.selftestGet(sid);
      wizard = applySnapshot(wizard, snap);
    }
  }
  renderWizard();
}

async function resumeWizard() {
  const saved = recallSession(window.localStorage);
  if (!saved) return;
  try {
    const snap = await api.selftestGet(saved);
    wizard = applySnapshot(IDLE, snap);
    renderWizard();
  } catch {
    forgetSession(window.localStorage);
  }
}

// ---------------------------------------------------------------------------
// maintenance
// ---------------------------------------------------------------------------

async function loadPlan() {
  const model = ($("#plan-model") as unknown as HTMLInputElement).value.trim();
  if (!model) return;
  const out = $("#plan-result");
  try {
    const plan = await api.maintenancePlan(model);
    const rows = plan.events
      .map((e) => `<tr><td>${e.due}</td><td>${e.title}</td></tr>`).join("");
    out.innerHTML =
      `<p><a href="${api.maintenanceIcsUrl(model)}">download .ics</a></p>` +
      `<table><tr><th>due</th><th>task</th></tr>${rows}</table>`;
  } catch (err) {
    out.textContent = err instanceof ApiFailure ? `${err.code}: ${err.message}` : "offline";
  }
}

// ---------------------------------------------------------------------------
// forum
// ---------------------------------------------------------------------------

let currentPostId: string | null = null;
const voteStates = new Map<string, VoteState>();

async function renderForumList() {
  const listing = await api.forumList();
  const box = $("#forum-posts");
  box.innerHTML = "";
  for (const post of listing.posts) {
    const item = document.createElement("div");
    item.className = "forum-post" + (post.status === "resolved" ? " resolved" : "");
    item.innerHTML = `<b>${post.title}</b> <small>${post.device_model} · ${post.replies ?? 0} replies · ${post.status}</small>`;
    item.onclick = () => void openPost(post.post_id);
    box.appendChild(item);
  }
}

async function openPost(postId: string) {
  currentPostId = postId;
  const post = await api.forumGet(postId);
  const box = $("#forum-detail");
  box.innerHTML = `<h3>${post.title}</h3><p>${post.body}</p>`;
  const replies = [...post.replies].sort(
    (a, b) => Number(b.accepted) - Number(a.accepted) || b.votes - a.votes,
  );
  for (const reply of replies) {
    voteStates.set(reply.reply_id, {
      replyId: reply.reply_id, votes: reply.votes, pendingDelta: 0,
    });
    const div = document.createElement("div");
    div.className = "reply" + (reply.accepted ? " accepted" : "");
    div.innerHTML = `<p>${reply.body}</p><small>${reply.accepted ? "✓ accepted · " : ""}${reply.promoted ? "promoted to knowledge base · " : ""}</small>`;
    const votes = document.createElement("span");
    votes.textContent = ` ${reply.votes} votes `;
    const up = document.createElement("button");
    up.textContent = "▲";
    up.onclick = () => void upvote(reply, votes);
    const accept = document.createElement("button");
    accept.textContent = "accept";
    accept.onclick = () => void acceptReply(post.post_id, reply.reply_id);
    div.append(votes, up, accept);
    box.appendChild(div);
  }
  const replyBtn = document.createElement("button");
  replyBtn.textContent = "reply";
  replyBtn.onclick = () => void createReply(postId);
  box.appendChild(replyBtn);
}

async function upvote(reply: ForumReply, label: HTMLElement) {
  let state = voteStates.get(reply.reply_id)!;
  state = optimisticUpvote(state);
  voteStates.set(reply.reply_id, state);
  label.textContent = ` ${state.votes} votes `;
  try {
    const server = await api.forumUpvote(reply.reply_id);
    state = reconcileSuccess(state, server);
  } catch (err) {
    if (isNetworkError(err)) {
      queue.enqueue("upvote", { reply_id: reply.reply_id });
      refreshBanner();
    }
    state = reconcileFailure(state, err instanceof ApiFailure ? err.code : "NetworkError");
  }
  voteStates.set(reply.reply_id, state);
  label.textContent = ` ${state.votes} votes `;
}

async function acceptReply(postId: string, replyId: string) {
  try {
    await api.forumAccept(postId, replyId);
    await openPost(postId);
  } catch (err) {
    if (err instanceof ApiFailure) alert(`${err.code}: ${err.message}`);
  }
}

async function createReply(postId: string) {
  const body = prompt("Reply:");
  if (body === null || !body.trim()) return;
  try {
    await api.forumReply(postId, body);
    await openPost(postId);
  } catch (err) {
    if (isNetworkError(err)) {
      queue.enqueue("forum_reply", { post_id: postId, body });
      refreshBanner();
    }
  }
}

async function createPost() {
  const title = ($("#post-title") as unknown as HTMLInputElement).value.trim();
  const body = ($("#post-body") as unknown as HTMLTextAreaElement).value.trim();
  const model = ($("#post-model") as unknown as HTMLInputElement).value.trim();
  if (!title || !body) return;
  try {
    await api.forumCreatePost(title, body, model);
    ($("#post-title") as unknown as HTMLInputElement).value = "";
    ($("#post-body") as unknown as HTMLTextAreaElement).value = "";
    await renderForumList(); // appears without a full page reload
  } catch (err) {
    if (isNetworkError(err)) {
      queue.enqueue("forum_post", { title, body, device_model: model });
      refreshBanner();
    } else if (err instanceof ApiFailure) {
      alert(`${err.code}: ${err.message}`);
    }
  }
}

// ---------------------------------------------------------------------------
// boot
// ---------------------------------------------------------------------------

function showTab(name: string) {
  document.querySelectorAll<HTMLElement>("main > section").forEach((s) => (s.hidden = true));
  $(`#tab-${name}`).hidden = false;
  document.querySelectorAll("nav button").forEach((b) =>
    b.classList.toggle("active", b.getAttribute("data-tab") === name),
  );
  if (name === "forum") void renderForumList().catch(() => undefined);
}

window.addEventListener("DOMContentLoaded", () => {
  document.querySelectorAll("nav button").forEach((b) =>
    b.addEventListener("click", () => showTab(b.getAttribute("data-tab")!)),
  );
  $("#chat-send").addEventListener("click", () => void sendChat());
  ($("#chat-input") as unknown as HTMLInputElement).addEventListener("keydown", (e) => {
    if ((e as KeyboardEvent).key === "Enter") void sendChat();
  });
  $("#code-go").addEventListener("click", () => void lookupCode());
  $("#log-go").addEventListener("click", () => void uploadLog());
  $("#wizard-start").addEventListener("click", () => void startWizard());
  for (const result of ["pass", "fail", "skipped"] as const) {
    $(`#wizard-${result}`).addEventListener("click", () => void advanceWizard(result));
  }
  $("#plan-go").addEventListener("click", () => void loadPlan());
  $("#post-create").addEventListener("click", () => void createPost());
  $("#token-save").addEventListener("click", () => {
    const token = ($("#token-input") as unknown as HTMLInputElement).value.trim();
    api.setToken(token || null);
    window.localStorage.setItem("devicedesk_token", token);
  });
  const savedToken = window.localStorage.getItem("devicedesk_token");
  if (savedToken) {
    api.setToken(savedToken);
    ($("#token-input") as unknown as HTMLInputElement).value = savedToken;
  }
  api.health().then((h) => {
    $("#health").textContent =
      `${h.status} · segments: ${Object.entries(h.segments).map(([k, v]) => `${k}=${v}`).join(" ")}`;
    const model = h.device_models[0] ?? "";
    ($("#wizard-model") as unknown as HTMLInputElement).value = model;
    ($("#plan-model") as unknown as HTMLInputElement).value = model;
    ($("#post-model") as unknown as HTMLInputElement).value = model;
  }).catch(() => {
    $("#health").textContent = "server unreachable";
  });
  void resumeWizard();
  void flushQueue();
  refreshBanner();
  showTab("chat");
});
