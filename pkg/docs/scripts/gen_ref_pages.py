"""Build the API reference tree for mkdocstrings from ``src/poissonnet``."""

from pathlib import Path

import mkdocs_gen_files

SRC_ROOT = Path("src")
PACKAGE = SRC_ROOT / "poissonnet"

# Entry points carry no API worth documenting
SKIP = {"__main__"}

nav = mkdocs_gen_files.Nav()

for source in sorted(PACKAGE.rglob("*.py")):
    parts = list(source.relative_to(SRC_ROOT).with_suffix("").parts)
    if parts[-1] in SKIP or "__pycache__" in parts:
        continue

    if parts[-1] == "__init__":
        parts = parts[:-1]
        page = Path(*parts, "index.md")
    else:
        page = Path(*parts).with_suffix(".md")

    nav[parts] = page.as_posix()
    target = Path("reference", page)
    with mkdocs_gen_files.open(target, "w") as fd:
        fd.write(f"# `{'.'.join(parts)}`\n\n::: {'.'.join(parts)}\n")
    mkdocs_gen_files.set_edit_path(target, source)

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
