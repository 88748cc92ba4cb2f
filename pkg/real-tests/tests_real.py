# tests_real.py
import numpy as np

from scramblesim import ScramblingSimulator, SimulationConfig

simulator = ScramblingSimulator(SimulationConfig(threads=4, show_progress=True))

# Hamming distance on a mid-size chain
times = np.geomspace(0.1, 100, 12)
result = simulator.hamming(L=64, N=8, times=times, M_s=3000, seed=7, n_initial_states=4)
print("Hamming distance:")
for t, D, err in zip(result.times, result.D, result.D_stderr):
    print(f"  t = {t:8.3f}  D = {D:.4f} +- {err:.4f}")

# Spectrum equivalence
report = simulator.spectrum_check(L=14, N=5)
print(f"\nSpectrum check (L=14, N=5):")
print(f"  Passed: {report['passed']}")
print(f"  Max deviation: {report['max_deviation']:.2e}")
