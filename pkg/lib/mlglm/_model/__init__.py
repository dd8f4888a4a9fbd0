from .activations import ACTIVATION_REGISTRY, ActivationSpec, SideInformation
from .sampling import (
    Disorder,
    dims,
    empirical_rho,
    empirical_rho_layers,
    norm_variance_decay,
    sample_forward,
)
from .spec import LayerSpec, ModelSpec, PriorSpec, RhoSequence
