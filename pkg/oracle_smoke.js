// Throwaway: run every manifest oracle in-process-per-fixture via child node.
const { execFileSync } = require('child_process');
const fs = require('fs');
const path = require('path');

const manifest = JSON.parse(fs.readFileSync('corpus/manifest.json', 'utf8'));

const runner = `
const path = require('path');
const fs = require('fs');
const spec = JSON.parse(process.argv[1]);
function resolveArgs(v) {
  if (Array.isArray(v)) return v.map(resolveArgs);
  if (v && typeof v === 'object') {
    if (typeof v.$json === 'string') return JSON.parse(v.$json);
    const out = {};
    for (const k of Object.keys(v)) out[k] = resolveArgs(v[k]);
    return out;
  }
  return v;
}
const mod = require(path.resolve(spec.dir, spec.oracle.module));
if (spec.oracle.pollute) {
  Object.prototype[spec.oracle.pollute.property] = spec.oracle.pollute.value;
}
let threw = null;
try {
  mod[spec.oracle.entry].apply(null, resolveArgs(spec.oracle.args));
} catch (e) {
  threw = String(e);
}
if (spec.oracle.pollute) {
  delete Object.prototype[spec.oracle.pollute.property];
}
let confirmed;
const w = spec.oracle.witness;
if (w.kind === 'proto-prop') {
  const probe = {};
  confirmed = JSON.stringify(probe[w.property]) === JSON.stringify(w.value);
  delete Object.prototype[w.property];
} else if (w.kind === 'marker-file') {
  confirmed = fs.existsSync(process.env.PROBE_MARKER);
} else {
  throw new Error('unknown witness kind ' + w.kind);
}
console.log(JSON.stringify({ confirmed, threw }));
`;

let bad = 0;
for (const [name, spec] of Object.entries(manifest.fixtures).sort()) {
  if (!spec.oracle) { console.log(`--   ${name}: no oracle`); continue; }
  const oracles = Array.isArray(spec.oracle) ? spec.oracle : [spec.oracle];
  oracles.forEach((oracle, i) => {
    const marker = path.join('/tmp', `probe-marker-${name}-${i}`);
    if (fs.existsSync(marker)) fs.unlinkSync(marker);
    const payload = JSON.stringify({ dir: `corpus/fixtures/${name}`, oracle });
    let out;
    try {
      out = JSON.parse(execFileSync(
        process.execPath, ['-e', runner, payload],
        { env: { ...process.env, PROBE_MARKER: marker }, encoding: 'utf8' },
      ).trim());
    } catch (e) {
      out = { confirmed: null, threw: 'runner crashed: ' + e.message };
    }
    const ok = out.confirmed === oracle.expect;
    if (!ok) bad += 1;
    console.log(`${ok ? 'ok ' : 'FAIL'} ${name}[${i}]: confirmed=${out.confirmed} expect=${oracle.expect}` +
      (out.threw ? ` threw=${out.threw}` : ''));
    if (fs.existsSync(marker)) fs.unlinkSync(marker);
  });
}
console.log('\nFAILURES:', bad);
