export function doSomething(): RegExp;
