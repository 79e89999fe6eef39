export = Abs;

declare function Abs(input: string): string;
