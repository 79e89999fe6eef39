export function pair(a: string, b: number): [string, number];
export function merge(a: { x: number }, b: { y: number }): { x: number } & { y: number };
