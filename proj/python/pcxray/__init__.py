from ._core import (
    Domain,
    GeodesicPath,
    MetricField,
    PathSample,
    PcxError,
    PiecewiseConstantFunction,
    Tiling,
    boundary_normal,
    cone_line_integral,
    default_stencil_halfwidth,
    global_lsq_reconstruct,
    integrate_along,
    layer_strip_reconstruct,
    load_tiling,
    make_sinogram,
    recover_cone_values,
    second_fundamental_form,
    trace_geodesic,
    validate_tiling,
    vandermonde_det,
    vandermonde_matrix,
    verify_injectivity,
)

__all__ = [
    "Domain",
    "GeodesicPath",
    "MetricField",
    "PathSample",
    "PcxError",
    "PiecewiseConstantFunction",
    "Tiling",
    "boundary_normal",
    "cone_line_integral",
    "default_stencil_halfwidth",
    "global_lsq_reconstruct",
    "integrate_along",
    "layer_strip_reconstruct",
    "load_tiling",
    "make_sinogram",
    "recover_cone_values",
    "second_fundamental_form",
    "trace_geodesic",
    "validate_tiling",
    "vandermonde_det",
    "vandermonde_matrix",
    "verify_injectivity",
]
