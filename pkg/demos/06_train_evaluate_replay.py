"""Train, evaluate, save, play and replay through the command line.

A short chance-sampled run over fresh deals, an exploitability estimate
on a seeded benchmark, then one logged game rendered as text.
"""

import os
import tempfile

from cfrp.cli import main

work = tempfile.mkdtemp(prefix="cfrp-demo-")
bench = os.path.join(work, "bench.txt")
store = os.path.join(work, "store.txt")
report = os.path.join(work, "report.csv")
log = os.path.join(work, "game.log")

main(["bench-gen", "--deals", "50", "--seed", "7", "--out", bench])
main(["train", "--iterations", "200", "--epoch-size", "100", "--seed", "1",
      "--store", store, "--benchmark", bench, "--report", report])
print(open(report).read())
main(["eval", "--store", store, "--benchmark", bench])
main(["play", "--store", store, "--seed", "2024", "--log", log, "--opponent", "qidui"])
main(["replay", "--log", log])
print("files in", work)
