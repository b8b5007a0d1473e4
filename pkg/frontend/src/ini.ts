/**
 * Flat `key = value` configuration parser, matching the dialect used by the
 * computation CLI: one assignment per line, `#` or `;` comments, no
 * sections, duplicate keys rejected.
 */

export class IniError extends Error {}

export function parseIni(text: string, source = "<memory>"): Map<string, string> {
  const values = new Map<string, string>();
  const lines = new Map<string, number>();
  text.split(/\r?\n/).forEach((raw, index) => {
    const lineno = index + 1;
    const line = raw.split("#", 1)[0].split(";", 1)[0].trim();
    if (line.length === 0) return;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new IniError(`${source}:${lineno}: expected 'key = value', got ${JSON.stringify(raw)}`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key.length === 0) {
      throw new IniError(`${source}:${lineno}: empty key`);
    }
    if (values.has(key)) {
      throw new IniError(
        `${source}:${lineno}: duplicate key '${key}' (first at line ${lines.get(key)})`,
      );
    }
    values.set(key, value);
    lines.set(key, lineno);
  });
  return values;
}
