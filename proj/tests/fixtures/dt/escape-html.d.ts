declare function escapeHTML(text: string): string;
declare namespace escapeHTML { }

export = escapeHTML;
