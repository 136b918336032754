import { DOMAIN_LABELS } from "../src/csv";

/** Synthetic scan CSV on an nPhi x nPsi grid of cell centers, matching the
 * production schema exactly. */
export function syntheticCsv(nPhi: number, nPsi: number, samples = 300): string {
  const lines = ["phi,psi,J0,P,count_below,samples,label"];
  for (let i = 0; i < nPhi; i++) {
    for (let j = 0; j < nPsi; j++) {
      const phi = (2 * Math.PI * (i + 0.5)) / nPhi;
      const psi = (2 * Math.PI * (j + 0.5)) / nPsi;
      const j0 = 0.5 * (1 + Math.sin(psi - 0.5));
      const count = (i * 31 + j * 17) % (samples + 1);
      const p = count / samples;
      const label = DOMAIN_LABELS[(i + j) % DOMAIN_LABELS.length];
      lines.push(
        [phi.toPrecision(17), psi.toPrecision(17), j0.toPrecision(17),
         p.toPrecision(17), count, samples, label].join(","));
    }
  }
  return lines.join("\n") + "\n";
}
