import Papa from 'papaparse';
import { z } from 'zod';
import { SchemaError } from './schema.js';

/** Strict CSV loading: exact header set, at least one data row, every row
 *  validated against the given schema. Anything else is rejected. */
export function parseCsv<T>(text: string, schema: z.ZodType<T>, expectedColumns: string[]): T[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`csv parse error: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const expected = [...expectedColumns].sort().join(',');
  const got = [...fields].sort().join(',');
  if (expected !== got) {
    throw new SchemaError(`csv columns [${fields.join(',')}] do not match [${expectedColumns.join(',')}]`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError('csv has no data rows');
  }
  return parsed.data.map((row, index) => {
    const result = schema.safeParse(row);
    if (!result.success) {
      throw new SchemaError(`csv row ${index + 1} rejected: ${result.error.issues[0]?.message}`);
    }
    return result.data;
  });
}

export const SWEEP_COLUMNS = [
  'schema_version', 'threshold', 'trials', 'detections',
  'rate', 'mean_rounds', 'theory_tail', 'base_seed',
];

export const CONGESTION_COLUMNS = ['schema_version', 'trial', 'seed', 'x', 'within'];
