#!/usr/bin/env node
// SMT-LIB front end over the z3-solver WASM build.
// Reads a script from the file given as argv[2] (or stdin) and prints the
// solver answer (sat/unsat/unknown plus model) on stdout.
'use strict';
const fs = require('fs');

async function main() {
  const input = process.argv[2]
    ? fs.readFileSync(process.argv[2], 'utf8')
    : fs.readFileSync(0, 'utf8');
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  try {
    const out = await Z3.eval_smtlib2_string(ctx, input);
    process.stdout.write(out.endsWith('\n') ? out : out + '\n');
  } catch (e) {
    process.stdout.write('(error "' + String(e).replace(/"/g, "'") + '")\n');
    process.exitCode = 1;
  }
  process.exit();
}

main();
