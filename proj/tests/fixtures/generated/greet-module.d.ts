export function makeGreeting(str: string): string;
export function makeGoodBye(): string;        
