import logging

from ns2d_bdf2 import SolverConfig, run
from ns2d_bdf2.forcing import kolmogorov_forcing
from ns2d_bdf2.initial import random_initial_field
from ns2d_bdf2.monitors import ConsistencyMonitor, ObservationMonitor
from ns2d_bdf2.spectral import Grid
from ns2d_bdf2.stats import StatsAccumulator

logging.basicConfig(level=logging.INFO)

grid = Grid(64)
cfg = SolverConfig(nu=0.01, k=1e-3, grid=grid, forcing=kolmogorov_forcing(grid, kf=4), steps=5000)
stats = StatsAccumulator(burn_in_steps=1000)
gaps = ConsistencyMonitor(window_start=1000)
report = run(cfg, omega0=random_initial_field(7, grid), monitors=[ObservationMonitor(accumulator=stats), gaps])
print(report.final_step, report.wall_time)
print(stats.estimate("enstrophy"))
print(gaps.result())
