// Minimal presentation client: slide navigation and live code documents
// over the binary protocol. Offsets count code points.
(function () {
  "use strict";
  const boot = JSON.parse(document.getElementById("cobra-boot").textContent);
  const enc = new TextEncoder();
  const dec = new TextDecoder("utf-8", { fatal: true });

  // Wire format.
  function Writer() { this.b = []; }
  Writer.prototype.byte = function (v) { this.b.push(v); };
  Writer.prototype.uint = function (v) {
    while (v >= 0x80) { this.b.push((v % 0x80) | 0x80); v = Math.floor(v / 0x80); }
    this.b.push(v);
  };
  Writer.prototype.str = function (s) { const u = enc.encode(s); this.uint(u.length); for (const x of u) this.b.push(x); };
  Writer.prototype.op = function (op) {
    this.uint(op.length);
    for (const c of op) {
      if (typeof c === "string") { this.byte(1); this.str(c); }
      else if (c > 0) { this.byte(0); this.uint(c); }
      else { this.byte(2); this.uint(-c); }
    }
  };
  function Reader(buf) { this.u = new Uint8Array(buf); this.p = 0; }
  Reader.prototype.byte = function () { return this.u[this.p++]; };
  Reader.prototype.uint = function () {
    let v = 0, m = 1, b;
    do { b = this.u[this.p++]; v += (b & 0x7f) * m; m *= 0x80; } while (b & 0x80);
    return v;
  };
  Reader.prototype.str = function () { const n = this.uint(); const s = dec.decode(this.u.subarray(this.p, this.p + n)); this.p += n; return s; };
  Reader.prototype.op = function () {
    const n = this.uint(), op = [];
    for (let i = 0; i < n; i++) {
      const k = this.byte();
      op.push(k === 0 ? this.uint() : k === 1 ? this.str() : -this.uint());
    }
    return op;
  };
  Reader.prototype.ann = function () {
    return { start: this.uint(), end: this.uint(), kind: this.byte(), cls: this.str(), message: this.str() };
  };

  // Operations: positive numbers retain, negative delete, strings insert.
  const cps = (s) => Array.from(s);
  function apply(text, op) {
    const t = cps(text); let i = 0, out = "";
    for (const c of op) {
      if (typeof c === "string") out += c;
      else if (c > 0) { out += t.slice(i, i + c).join(""); i += c; }
      else i -= c;
    }
    return out;
  }
  function diff(a, b) {
    const x = cps(a), y = cps(b);
    let p = 0; while (p < x.length && p < y.length && x[p] === y[p]) p++;
    let s = 0; while (s < x.length - p && s < y.length - p && x[x.length - 1 - s] === y[y.length - 1 - s]) s++;
    const op = [];
    if (p) op.push(p);
    if (y.length - p - s) op.push(y.slice(p, y.length - s).join(""));
    if (x.length - p - s) op.push(-(x.length - p - s));
    if (s) op.push(s);
    return op;
  }
  function norm(op) {
    const out = [];
    for (const c of op) {
      if (c === 0 || c === "") continue;
      const last = out[out.length - 1];
      if (out.length && typeof c === typeof last && (typeof c === "string" || (c > 0) === (last > 0))) out[out.length - 1] = last + c;
      else out.push(c);
    }
    return out;
  }
  function len(c) { return typeof c === "string" ? cps(c).length : Math.abs(c); }
  function compose(a, b) {
    a = a.slice(); b = b.slice(); const out = [];
    let i = 0, j = 0, x = a[0], y = b[0];
    while (x !== undefined || y !== undefined) {
      if (x !== undefined && typeof x === "number" && x < 0) { out.push(x); x = a[++i]; continue; }
      if (y !== undefined && typeof y === "string") { out.push(y); y = b[++j]; continue; }
      const n = Math.min(len(x), len(y));
      if (typeof x === "string") {
        if (y > 0) out.push(cps(x).slice(0, n).join(""));
        x = n < len(x) ? cps(x).slice(n).join("") : a[++i];
      } else {
        out.push(y > 0 ? n : -n);
        x = n < x ? x - n : a[++i];
      }
      y = n < len(y) ? (y > 0 ? y - n : y + n) : b[++j];
    }
    return norm(out);
  }
  function transform(a, b) {
    const a2 = [], b2 = []; let i = 0, j = 0, x = a[0], y = b[0];
    while (x !== undefined || y !== undefined) {
      if (typeof x === "string") { a2.push(x); b2.push(len(x)); x = a[++i]; continue; }
      if (typeof y === "string") { a2.push(len(y)); b2.push(y); y = b[++j]; continue; }
      const n = Math.min(Math.abs(x), Math.abs(y));
      if (x > 0 && y > 0) { a2.push(n); b2.push(n); }
      else if (x < 0 && y > 0) a2.push(-n);
      else if (x > 0 && y < 0) b2.push(-n);
      x = n < Math.abs(x) ? (x > 0 ? x - n : x + n) : a[++i];
      y = n < Math.abs(y) ? (y > 0 ? y - n : y + n) : b[++j];
    }
    return [norm(a2), norm(b2)];
  }

  // Documents.
  const docs = {};
  const ws = new WebSocket((location.protocol === "https:" ? "wss://" : "ws://") + location.host + boot.websocket);
  ws.binaryType = "arraybuffer";
  function send(build) { const w = new Writer(); build(w); ws.send(new Uint8Array(w.b)); }
  function sendEdit(d) { send((w) => { w.byte(4); w.str(d.id); w.uint(d.seq); w.op(d.outstanding); }); }

  const codes = document.querySelectorAll(".slides code");
  for (const c of boot.code) {
    const el = codes[c.block];
    if (!el) continue;
    const area = document.createElement("textarea");
    area.className = "cobra-code " + (c.classes || []).join(" ");
    area.spellcheck = false;
    el.replaceWith(area);
    const d = docs[c.doc] || (docs[c.doc] = { id: c.doc, text: "", seq: 0, outstanding: null, buffer: null, views: [], anns: [] });
    d.views.push(area);
    area.addEventListener("input", () => {
      const op = diff(d.text, area.value);
      d.text = area.value;
      for (const v of d.views) if (v !== area) v.value = d.text;
      if (d.outstanding) d.buffer = d.buffer ? compose(d.buffer, op) : op;
      else { d.outstanding = op; sendEdit(d); }
    });
  }
  function show(d) {
    for (const v of d.views) if (v.value !== d.text) v.value = d.text;
    const errors = d.anns.filter((a) => a.kind === 0).length;
    for (const v of d.views) { v.classList.toggle("cobra-error", errors > 0); v.title = d.anns.filter((a) => a.message && (a.kind === 0 || (a.kind === 1 && boot.show.warnings) || (a.kind === 2 && boot.show.infos))).map((a) => a.message).join("\n"); }
  }

  ws.onopen = () => send((w) => { w.byte(0); w.uint(boot.protocolVersion); });
  ws.onmessage = (ev) => {
    const r = new Reader(ev.data);
    const tag = r.byte();
    if (tag === 1) {
      r.str();
      const n = r.uint();
      for (let i = 0; i < n; i++) { const id = r.str(); if (docs[id]) send((w) => { w.byte(2); w.str(id); }); }
    } else if (tag === 3) {
      const d = docs[r.str()]; if (!d) return;
      d.seq = r.uint(); d.text = r.str(); d.outstanding = d.buffer = null; show(d);
    } else if (tag === 5) {
      const d = docs[r.str()]; d.seq = r.uint();
      d.outstanding = d.buffer; d.buffer = null;
      if (d.outstanding) sendEdit(d);
    } else if (tag === 6) {
      const d = docs[r.str()]; d.seq = r.uint(); let op = r.op();
      if (d.outstanding) { const t = transform(d.outstanding, op); d.outstanding = t[0]; op = t[1]; }
      if (d.buffer) { const t = transform(d.buffer, op); d.buffer = t[0]; op = t[1]; }
      d.text = apply(d.text, op); show(d);
    } else if (tag === 7) {
      const d = docs[r.str()]; if (!d) return; r.uint();
      const n = r.uint(); d.anns = []; for (let i = 0; i < n; i++) d.anns.push(r.ann()); show(d);
    } else if (tag === 9) {
      location.reload();
    }
  };

  // Slides: one top-level section at a time.
  const slides = Array.from(document.querySelectorAll(".slides > section"));
  let current = Math.max(0, parseInt(location.hash.slice(1), 10) || 0);
  function go(i) {
    current = Math.min(Math.max(i, 0), slides.length - 1);
    slides.forEach((s, k) => { s.hidden = k !== current; });
    history.replaceState(null, "", "#" + current);
  }
  document.addEventListener("keydown", (e) => {
    if (e.target.tagName === "TEXTAREA") return;
    if (e.key === "ArrowRight" || e.key === "PageDown" || e.key === " ") go(current + 1);
    if (e.key === "ArrowLeft" || e.key === "PageUp") go(current - 1);
  });
  if (slides.length) go(current);
})();
