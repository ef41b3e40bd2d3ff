import init, { curveAt, scoreOf, sieveFrame, sieveFrameCount } from "./pkg/motivic_web.js";

const $ = (id) => document.getElementById(id);
let current = null;

function fail(target, err) {
  target.innerHTML = "";
  const span = document.createElement("span");
  span.className = "error";
  span.textContent = String(err.message ?? err);
  target.appendChild(span);
}

function showCurve() {
  $("curve-info").textContent = "counting...";
  // let the status paint before the count blocks the thread
  setTimeout(() => {
    try {
      current = JSON.parse(curveAt($("curve").value, Number($("prime").value)));
      $("circle").innerHTML = current.svg;
      $("curve-info").textContent =
        `N_k: ${current.counts.join(", ")}\n` +
        `L(z): ${current.coefficients.join(", ")}\n` +
        `alphas: ${current.alphas.map((a) => a.toFixed(4)).join(", ")}\n` +
        `period: ${current.period.toFixed(4)} s\n` +
        `max ||z| - p^(-1/2)|: ${current.weil_deviation.toExponential(2)}`;
      $("play").disabled = false;
    } catch (err) {
      current = null;
      $("play").disabled = true;
      $("circle").innerHTML = "";
      fail($("curve-info"), err);
    }
  }, 10);
}

function play() {
  if (!current) return;
  const ctx = new AudioContext();
  const start = ctx.currentTime + 0.05;
  const periods = 2;
  for (let k = 0; k < periods; k++) {
    current.alphas.forEach((alpha, j) => {
      const t = start + (current.period * (alpha + Math.PI + 2 * Math.PI * k)) / (2 * Math.PI);
      const osc = ctx.createOscillator();
      const gain = ctx.createGain();
      osc.frequency.value = 440 * Math.pow(2, (current.pitches[j] - 69) / 12);
      gain.gain.setValueAtTime(0.2, t);
      gain.gain.exponentialRampToValueAtTime(0.001, t + current.period / 4);
      osc.connect(gain).connect(ctx.destination);
      osc.start(t);
      osc.stop(t + current.period / 4);
    });
  }
}

function showScore() {
  try {
    const [s] = JSON.parse(scoreOf(Number($("score-prime").value)));
    $("score-info").textContent =
      `continued fraction: [${s.cf_terms.join("; ")}]\n` +
      `notes: ${s.notes10.join(", ")}\n` +
      `pitches: ${s.pitches.join(", ")}`;
  } catch (err) {
    fail($("score-info"), err);
  }
}

function showFrame() {
  const f = JSON.parse(sieveFrame(Number($("step").value)));
  $("step-label").textContent = `p = ${f.p}, ${f.stage}, ${f.upper} upstairs, ${f.highlight} descending`;
  $("sieve-svg").innerHTML = f.svg;
}

await init();
$("curve-form").addEventListener("submit", (e) => { e.preventDefault(); showCurve(); });
$("score-form").addEventListener("submit", (e) => { e.preventDefault(); showScore(); });
$("play").addEventListener("click", play);
$("step").max = sieveFrameCount() - 1;
$("step").addEventListener("input", showFrame);
showFrame();
showScore();
