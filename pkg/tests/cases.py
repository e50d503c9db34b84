"""Command-line invocations over the shipped instances with their expected exit codes."""

from pathlib import Path

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def inst(name: str) -> str:
    return str(INSTANCES / name)


CLI_CASES = [
    (["validate", inst("matrix2.cri")], 0),
    (["cotensor", inst("matrix2.cri"), "L", "CC"], 0),
    (["coend", inst("matrix2.cri"), "L"], 0),
    (["cosep", inst("matrix2.cri")], 0),
    (["cosep", inst("matrix2.cri"), "--field", "gf:5"], 0),
    (["cosplit", inst("matrix2.cri")], 0),
    (["injective", inst("matrix2.cri"), "L"], 0),
    (["comatrix", inst("comatrix_col.cri")], 0),
    (["comatrix", inst("dual_numbers_comatrix.cri")], 0),
    (["cosplit", inst("dual_numbers_comatrix.cri")], 1),
    (["cosep", inst("dual_numbers_comatrix.cri")], 0),
    (["equiv-cert", inst("cert_matrix2.cri")], 0),
    (["equiv-sigma", inst("morita_m2.cri"), "--branch", "faithfully_flat"], 0),
    (["equiv-sigma", inst("morita_m2.cri"), "--branch", "coseparable", "--samples", "1"], 0),
    (["equiv-sigma", inst("qq_nonfaithful.cri")], 1),
    (["equiv-induction", inst("eps_trivial.cri")], 0),
    (["equiv-induction", inst("eps_matrix2.cri")], 1),
    (["cosep", inst("divided2.cri"), "D"], 1),
    (["injective", inst("divided2.cri"), "Reg"], 0),
    (["injective", inst("divided2.cri"), "Low"], 1),
    (["coend", inst("divided2.cri"), "Low"], 2),
    (["graded-build", inst("graded_c2.cri")], 0),
    (["graded-bridge", inst("graded_c2.cri")], 0),
    (["graded-morita", inst("graded_c2.cri")], 0),
    (["graded-induction", inst("graded_c2.cri")], 1),
    (["graded-induction", inst("graded_c2.cri"), "--branch", "left"], 1),
]


def all_reports() -> str:
    """Concatenated stdout of every case, as one machine-readable document."""
    import contextlib
    import io

    from coringkit.cli import main

    chunks = []
    for args, _ in CLI_CASES:
        out = io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
            main(args)
        chunks.append(out.getvalue())
    return "".join(chunks)


if __name__ == "__main__":
    import sys

    sys.stdout.write(all_reports())
