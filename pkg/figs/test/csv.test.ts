import assert from 'node:assert/strict';
import { test } from 'node:test';

import { byScenario, CsvFormatError, parseBenchCsv } from '../src/csv';

const HEADER =
  'scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,rep1_ms,failures';

test('parses well-formed rows', () => {
  const rows = parseBenchCsv(
    [HEADER, 'wifi,tcp,file_size,256000,256000,1234.500,1234.500,0'].join('\n'),
  );
  assert.equal(rows.length, 1);
  assert.deepEqual(rows[0], {
    scenario: 'wifi',
    protocol: 'tcp',
    sweepParam: 'file_size',
    sweepValue: 256000,
    fileSizeBytes: 256000,
    meanMs: 1234.5,
    failures: 0,
  });
});

test('header-only file yields zero rows', () => {
  assert.deepEqual(parseBenchCsv(HEADER), []);
});

test('empty mean marks an all-failed row', () => {
  const rows = parseBenchCsv(
    [HEADER, 'wifi,tcp,file_size,256000,256000,,,5'].join('\n'),
  );
  assert.equal(rows[0].meanMs, null);
  assert.equal(rows[0].failures, 5);
});

test('missing required column is a format error', () => {
  const bad = 'scenario,protocol,sweep_value\nwifi,tcp,1';
  assert.throws(() => parseBenchCsv(bad), CsvFormatError);
  assert.throws(() => parseBenchCsv(bad), /missing required column/);
});

test('ragged row is a format error', () => {
  assert.throws(
    () => parseBenchCsv([HEADER, 'wifi,tcp,file_size,1,1'].join('\n')),
    CsvFormatError,
  );
});

test('non-numeric sweep value is a format error', () => {
  assert.throws(
    () =>
      parseBenchCsv(
        [HEADER, 'wifi,tcp,file_size,huge,256000,1.000,1.000,0'].join('\n'),
      ),
    CsvFormatError,
  );
});

test('empty input is a format error', () => {
  assert.throws(() => parseBenchCsv(''), CsvFormatError);
});

test('byScenario groups and preserves order', () => {
  const rows = parseBenchCsv(
    [
      HEADER,
      'lte,tcp,file_size,1,1,1.000,1.000,0',
      'wifi,tcp,file_size,1,1,1.000,1.000,0',
      'lte,quic,file_size,1,1,1.000,1.000,0',
    ].join('\n'),
  );
  const groups = byScenario(rows);
  assert.deepEqual([...groups.keys()], ['lte', 'wifi']);
  assert.equal(groups.get('lte')!.length, 2);
});
