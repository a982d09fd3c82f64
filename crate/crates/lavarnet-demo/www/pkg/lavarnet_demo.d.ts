/* tslint:disable */
/* eslint-disable */

/**
 * A live training run of a lagged-variable forecaster in the page.
 */
export class DemoSession {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Lag-weight magnitudes of the checkpointed model for one target plus
     * interpretability scores against the generated ground truth:
     * `{"rows": T, "cols": K, "weights": [[...]], "hits": [[...]], "r_l": .., "r_v": ..}`.
     */
    lag_weights(target: number): string;
    /**
     * Build the dataset (z-scored, 60/20/20 split, T-step windows) and
     * initialize the model.
     */
    constructor(source: string, variant: string, k_vars: number, length: number, coupling: number, density: number, order: number, t_steps: number, neurons: number, epochs: number, seed: bigint);
    /**
     * Test-split forecasts of the checkpointed model for one target:
     * `{"actual": [...], "predicted": [...], "mae": ..}`.
     */
    predictions(target: number): string;
    /**
     * Run one training epoch; returns
     * `{"epoch": i, "train_loss": .., "val_loss": .., "lr": .., "done": bool}`.
     */
    step_epoch(): string;
}

/**
 * Generate a synthetic multivariate series and return it as JSON:
 * `{"names": [...], "rows": [[...], ...], "truth": [[source, lag, target], ...]}`
 * (indices 1-based, matching the on-disk formats).
 */
export function generate_series(source: string, k_vars: number, length: number, coupling: number, density: number, order: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demosession_free: (a: number, b: number) => void;
    readonly demosession_lag_weights: (a: number, b: number) => [number, number, number, number];
    readonly demosession_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number, m: bigint) => [number, number, number];
    readonly demosession_predictions: (a: number, b: number) => [number, number, number, number];
    readonly demosession_step_epoch: (a: number) => [number, number, number, number];
    readonly generate_series: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
