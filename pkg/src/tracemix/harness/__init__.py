"""Session orchestration, transcripts, tamper injection and benchmarks."""
