//! Quantitative bounds as checkable computations: Steinhaus radius lower
//! bounds, one-dimensional constants, thresholds, Steiner formulas and
//! planar shape functionals.

mod corollary;
mod one_d;
mod radius;
mod shape;
mod steiner;

pub use corollary::{corollary_range_check, RangeFunction, RangeStep, RangeVerdict};
pub use one_d::{
    half_hull_threshold, k1_family, one_d_constants, verify_from_k1, verify_one_d_containment, OneDCertificate,
    OneDConstants, OneDVerdict,
};
pub use radius::{steinhaus_radius_bruteforce, theorem1_bound, theorem2_bound, BoundReport, SubsetFamily};
pub use shape::{kakeya_equivalence_check, shape_functionals, KakeyaReport, ShapeFunctionals};
pub use steiner::{measure_box_dilation, steiner_2d_check, steiner_3d_closed_forms, Shape3, Steiner2dReport, Steiner3d};
