/** Control-panel state and local form validation.
 *
 * Bad input is rejected before any request leaves the browser; service-side
 * errors (unknown agent, etc.) are rendered from the {code, message} body.
 */

import { PerturbationKind } from "./api.js";

export type RunMode = "paused" | "stepping" | "running";

export interface ControlState {
  sessionId: string | null;
  runMode: RunMode;
  selectedAgents: string[];
  inFlight: boolean;
}

export interface PerturbationForm {
  kind: PerturbationKind;
  ligand?: string;
  magnitude?: number;
  agent?: string;
  k_base?: number;
  k_deact?: number;
}

export interface ValidationResult {
  ok: boolean;
  error?: string;
}

export function controlsDisabled(state: ControlState): boolean {
  return state.sessionId === null || state.inFlight;
}

export function validatePerturbation(form: PerturbationForm): ValidationResult {
  switch (form.kind) {
    case "inject-ligand": {
      if (!form.ligand) {
        return { ok: false, error: "ligand name is required" };
      }
      const magnitude = form.magnitude ?? NaN;
      if (!Number.isFinite(magnitude) || magnitude < 0) {
        return { ok: false, error: "dose magnitude must be a number >= 0" };
      }
      return { ok: true };
    }
    case "knockout-agent":
      return form.agent
        ? { ok: true }
        : { ok: false, error: "agent name is required" };
    case "set-kinetics": {
      for (const key of ["k_base", "k_deact"] as const) {
        const value = form[key];
        if (value !== undefined && (!Number.isFinite(value) || value <= 0)) {
          return { ok: false, error: `${key} must be a number > 0` };
        }
      }
      if (form.k_base === undefined && form.k_deact === undefined) {
        return { ok: false, error: "at least one rate constant is required" };
      }
      return { ok: true };
    }
  }
}

export function payloadFor(form: PerturbationForm): Record<string, unknown> {
  switch (form.kind) {
    case "inject-ligand":
      return { ligand: form.ligand, magnitude: form.magnitude };
    case "knockout-agent":
      return { agent: form.agent };
    case "set-kinetics": {
      const payload: Record<string, unknown> = {};
      if (form.k_base !== undefined) payload.k_base = form.k_base;
      if (form.k_deact !== undefined) payload.k_deact = form.k_deact;
      return payload;
    }
  }
}
