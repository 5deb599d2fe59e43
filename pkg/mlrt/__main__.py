from mlrt.cli import run

run()
