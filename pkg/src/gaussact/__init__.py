"""Covariance-matrix numerics for Gaussian channels and capacity activation."""

__version__ = "0.1.0"

from .capacity import (
    CapacityKind,
    CapacityValue,
    CoherentInfoResult,
    activation_gap,
    coherent_information,
    coherent_information_purified,
    lossy_capacity,
    ta_capacity_upper_bound,
)
from .channels import (
    ChannelKind,
    GaussianChannel,
    apply,
    compose,
    is_entanglement_breaking_ta,
    is_nondistillable_state,
    is_ppt_channel,
    make_identity,
    make_lossy,
    make_ssy_ppt,
    make_thermal_attenuator,
    tensor,
    validate,
)
from .dilation import Dilation, JointOutput, complementary_entropy, dilate, joint_output, tensor_dilation
from .experiments import (
    ActivationRecord,
    InputParams,
    SweepSpec,
    find_threshold,
    gamma_in,
    nbar,
    optimize_input,
    run_sweep,
    solve_y,
)
from .symplectic import (
    direct_sum,
    gaussian_entropy,
    is_psd_hermitian,
    symplectic_eigenvalues,
    symplectic_form,
)
from .tolerances import DEFAULT as DEFAULT_TOLERANCES
from .tolerances import Tolerances
