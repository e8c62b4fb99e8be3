//! Built-in matrices and the end-to-end certificate pipelines.

pub mod appendix;
pub mod data;
pub mod layered;
pub mod lift;
pub mod prop_usc;

pub use appendix::{verify_appendix, Appendix, AppendixCertificate};
pub use layered::{
    build_layered_tile, choose_k_vector, layered_pipeline, verify_layer_sum_identity, verify_layered_nonspectral, LayeredCertificate,
    LayeredReport, LayeredTile, LayeredTileSpec,
};
pub use lift::{grid_lift, grid_lift_tiling};
pub use prop_usc::{
    build_k_difference_rows, solve_y, verify_decomposition, verify_log_hadamard, verify_p_matrix, verify_prop_usc,
    LogHadamardMatrix, PropUsc, PropUscCertificate,
};
