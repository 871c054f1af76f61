export type CsvTable = {
  header: string[];
  rows: string[][];
};

/** Minimal CSV reader for the tool-generated curve/PCA exports
 * (no quoting or embedded commas in those files). */
export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) return { header: [], rows: [] };
  const [first, ...rest] = lines;
  return {
    header: (first as string).split(","),
    rows: rest.map((line) => line.split(",")),
  };
}

export function column(table: CsvTable, name: string): string[] {
  const at = table.header.indexOf(name);
  if (at < 0) throw new Error(`missing CSV column ${name}`);
  return table.rows.map((row) => row[at] ?? "");
}
