# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from .drift import (check_plan_drift, DriftScanReport, fuzz_generator, FuzzReport, IdentityCheck, inflated_plan, ito_expansion_identity,
                    scan_boundary_drift, scan_recurrence_drift, write_scan_csv)
from .engine import batch_csv_header, functional_name, path_generator, PathBatch, PathRecord, run_batch, run_path, SimConfig, step, write_batch_csv
from .estimators import (DecayFit, DistributionEstimate, empirical_distribution, fit_log_linear_decay, fit_tv_decay, histogram_tv, MonteCarloEstimate,
                         occupation_distribution, recurrence_batch, sampling_tv, tv_distance, VerificationReport, Verdict, verify_additive_functional,
                         verify_boundary_avoidance, verify_exp_moment, verify_hit_probability, verify_stationary, verify_tv_decay)
from .report import CsvReportWriter, flatten, JsonReportWriter, ReportWriter
from .stopping import StoppingSpec, StopReason
