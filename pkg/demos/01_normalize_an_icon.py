"""Walk one messy icon through the unification pipeline.

The input mixes shape tags, relative path commands, smooth curves, an
arc, nested group transforms and three different color syntaxes. The
output is the canonical form: absolute M/L/C paths only, transforms
flattened, fills resolved to hex, everything on the 0..1024 canvas.
"""

from svgforge import normalize_document, parse_document, serialize_document

MESSY = """\
<svg viewBox="0 0 48 48">
  <title>demo icon</title>
  <g transform="translate(4 2) scale(0.9)" fill="steelblue">
    <rect x="2" y="2" width="20" height="12" rx="3"/>
    <circle cx="34" cy="10" r="7"/>
  </g>
  <path d="m6 30 q6 -8 12 0 t12 0 a6 6 0 0 1 10 4 l-2 8 h-30 z"
        style="fill:rgb(230,57,70)"/>
</svg>
"""


def main() -> None:
    print("input document:")
    print(MESSY)

    doc, diagnostics = parse_document(MESSY)
    print(f"parsed elements: {diagnostics.element_counts}")

    normalized, report = normalize_document(doc)
    print("\nwhat normalization did:")
    for key, value in report.as_dict().items():
        print(f"  {key}: {value}")

    print("\nnormalized document:")
    text = serialize_document(normalized)
    for chunk in text.replace("><", ">\n<").splitlines():
        print(f"  {chunk}")

    print("\nper-path summary:")
    for i, path in enumerate(normalized.paths):
        kinds = {}
        for cmd in path.commands:
            kinds[type(cmd).__name__] = kinds.get(type(cmd).__name__, 0) + 1
        print(f"  path {i}: fill #{path.fill.value}, {kinds}")


if __name__ == "__main__":
    main()
