/* tslint:disable */
/* eslint-disable */

export class Edges {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly pixels: Uint8Array;
    /**
     * Infinity when the map matches the exact one.
     */
    readonly psnr: number;
}

export class Product {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    approx: bigint;
    bound: bigint;
    exact: bigint;
    stages: number;
}

/**
 * Names accepted by every `design` argument.
 */
export function designs(): string[];

/**
 * Laplacian edge map of a grayscale image through `design`.
 */
export function edges(design: string, width: number, height: number, pixels: Uint8Array): Edges;

/**
 * Signed error `approx - exact` for every 8-bit operand pair, row-major by `a`.
 */
export function error_map(design: string): Int32Array;

/**
 * One product through `design` at `width` bits.
 */
export function multiply(design: string, width: number, a: bigint, b: bigint): Product;

/**
 * Exhaustive 8-bit error metrics as JSON.
 */
export function report(design: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_edges_free: (a: number, b: number) => void;
    readonly __wbg_get_product_approx: (a: number) => bigint;
    readonly __wbg_get_product_bound: (a: number) => bigint;
    readonly __wbg_get_product_exact: (a: number) => bigint;
    readonly __wbg_get_product_stages: (a: number) => number;
    readonly __wbg_product_free: (a: number, b: number) => void;
    readonly __wbg_set_product_approx: (a: number, b: bigint) => void;
    readonly __wbg_set_product_bound: (a: number, b: bigint) => void;
    readonly __wbg_set_product_exact: (a: number, b: bigint) => void;
    readonly __wbg_set_product_stages: (a: number, b: number) => void;
    readonly designs: () => [number, number];
    readonly edges: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly edges_pixels: (a: number) => [number, number];
    readonly edges_psnr: (a: number) => number;
    readonly error_map: (a: number, b: number) => [number, number, number, number];
    readonly multiply: (a: number, b: number, c: number, d: bigint, e: bigint) => [number, number, number];
    readonly report: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
