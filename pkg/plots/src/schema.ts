import { z } from 'zod';

export const SUPPORTED_SCHEMA_VERSION = 1;

export class SchemaError extends Error {}

const versionField = z.coerce
  .number()
  .refine((v: number): boolean => v === SUPPORTED_SCHEMA_VERSION, {
    message: `schema_version must be ${SUPPORTED_SCHEMA_VERSION}`,
  });

export const sweepRowSchema = z.object({
  schema_version: versionField,
  threshold: z.coerce.number().int(),
  trials: z.coerce.number().int().positive(),
  detections: z.coerce.number().int().nonnegative(),
  rate: z.coerce.number().min(0).max(1),
  mean_rounds: z.coerce.number().nonnegative(),
  theory_tail: z.coerce.number().min(0).max(1),
  base_seed: z.coerce.number(),
});
export type SweepRow = z.infer<typeof sweepRowSchema>;

export const congestionRowSchema = z.object({
  schema_version: versionField,
  trial: z.coerce.number().int().nonnegative(),
  seed: z.coerce.number(),
  x: z.coerce.number().int().nonnegative(),
  within: z.coerce.number().refine((v) => v === 0 || v === 1),
});
export type CongestionRow = z.infer<typeof congestionRowSchema>;

export const summarySchema = z.object({
  schema_version: versionField,
  label: z.string(),
  trials: z.number().int().positive(),
  threshold: z.number().int(),
  palette: z.number().int().positive(),
  path_len: z.number().int().positive(),
  n_paths: z.number().int().positive(),
  r: z.number().min(0).max(1),
  empirical: z.object({
    mean: z.number(),
    variance: z.number(),
    p_within: z.number(),
  }),
  theory: z.object({
    mean: z.number(),
    variance: z.number(),
    p_within: z.number(),
  }),
  ks_distance: z.number(),
});
export type Summary = z.infer<typeof summarySchema>;

export function parseSummary(text: string): Summary {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SchemaError(`summary is not valid JSON: ${String(e)}`);
  }
  const result = summarySchema.safeParse(raw);
  if (!result.success) {
    throw new SchemaError(`summary rejected: ${result.error.issues[0]?.message}`);
  }
  return result.data;
}
