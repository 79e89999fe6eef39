declare namespace gh {
  interface Options {
      enterprise?: boolean;
  }
  interface Result {
  }
}

declare function gh(url: string | {url: string}, options?: gh.Options): gh.Result | null;

export = gh;
