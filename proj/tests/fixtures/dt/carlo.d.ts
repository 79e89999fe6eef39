export type AppEvent = 'exit' | 'window';
export function on(event: AppEvent, handler: () => void): void;
