import { readFileSync, writeFileSync, mkdirSync } from 'node:fs';
import { dirname } from 'node:path';
import { renderCongestion } from './congestion.js';
import { SchemaError } from './schema.js';
import { renderSweep } from './sweep.js';

const USAGE = `usage:
  plots sweep --csv FILE [--csv FILE ...] -o OUT.svg [--title T] [--label L ...]
  plots congestion --csv FILE --summary FILE -o OUT.svg [--title T]

exit codes: 0 ok, 1 usage, 2 rejected input`;

interface Args {
  command: string;
  csv: string[];
  summary?: string;
  output?: string;
  title?: string;
  labels: string[];
}

function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (command !== 'sweep' && command !== 'congestion') {
    throw new Error(`unknown command ${command ?? '(none)'}`);
  }
  const args: Args = { command, csv: [], labels: [] };
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    const value = rest[i + 1];
    const need = () => {
      if (value === undefined) throw new Error(`${flag} needs a value`);
      i++;
      return value;
    };
    switch (flag) {
      case '--csv':
        args.csv.push(need());
        break;
      case '--summary':
        args.summary = need();
        break;
      case '-o':
      case '--output':
        args.output = need();
        break;
      case '--title':
        args.title = need();
        break;
      case '--label':
        args.labels.push(need());
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.csv.length === 0 || !args.output) {
    throw new Error('need at least one --csv and -o');
  }
  if (command === 'congestion' && (!args.summary || args.csv.length !== 1)) {
    throw new Error('congestion needs exactly one --csv and a --summary');
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    console.error(USAGE);
    return 1;
  }
  try {
    const svg =
      args.command === 'sweep'
        ? renderSweep(
            args.csv.map((p) => readFileSync(p, 'utf8')),
            { title: args.title, labels: args.labels.length ? args.labels : undefined },
          )
        : renderCongestion(
            readFileSync(args.csv[0], 'utf8'),
            readFileSync(args.summary!, 'utf8'),
            { title: args.title },
          );
    mkdirSync(dirname(args.output!), { recursive: true });
    writeFileSync(args.output!, svg);
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`rejected: ${e.message}`);
      return 2;
    }
    console.error(String(e instanceof Error ? e.message : e));
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(main(process.argv.slice(2)));
}
