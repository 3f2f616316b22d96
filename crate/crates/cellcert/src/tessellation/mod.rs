//! Frames, sign patterns, index-subset selection and arrangement combinatorics.

pub mod combinatorics;
mod frame;
pub mod io;
pub mod oracle_d2;

pub use combinatorics::{binom_tail_ratio_bound, expected_face_count, schlafli_cell_count, TailRatioBound};
pub use frame::{
    draw_fixed_indices, make_frame, select_full_band, select_half_band, select_margin_band, select_oriented,
    select_subsets, select_subsets_sized, sign_encode, sign_encode_strict, tangential_inner, tau_of, ConstantsConfig,
    GaussianFrame, SignPattern, SubsetSelection, SubsetVariant,
};
pub use oracle_d2::{arc_count_d2, exact_cell_d2, D2Cell};

pub(crate) use frame::sorted_union;
