/** Client-side mirror of the service's label normalization: lowercase runs
 * of letters/digits joined with underscores. Used only to build cluster
 * names for re-queries; the service remains the authority. */

export function tokens(text: string): string[] {
  return text.toLowerCase().match(/[\p{L}\p{N}]+/gu) ?? [];
}

export function clusterName(label: string): string {
  return tokens(label).join("_");
}
