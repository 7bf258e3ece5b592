# Copyright 2026 The crb-compress Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fisher information and Cramer-Rao bounds under random compression."""

from ._core import (
    BetaLaw,
    Error,
    InfeasibleError,
    compressed_crb,
    compressed_fim,
    compressed_kl,
    confidence_at,
    crb,
    crb_angle_form,
    crb_ratio_law,
    curve,
    eig_joint_logpdf,
    ellipse_locus,
    fim,
    finite_diff_jacobian,
    kl_divergence,
    kl_ratio_law,
    ks_one_sample,
    ks_two_sample,
    ln_cmv_gamma,
    matrix_beta_logpdf,
    min_measurements,
    moments,
    normalized_fim,
    run_experiment,
    sample_compressor,
    two_source_angles,
    ula_jacobian,
    ula_mean,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
