pub mod dedup;
pub mod error;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod moments;
pub mod pairs;
pub mod radial;
pub mod reconstruct;
pub mod synth;

pub use error::{Result, ZernikeError};
pub use grid::{embed_image, embedded_size, pixel_to_polar, DiscGeometry, DiscPixel, GridMeta, ImageGrid};
pub use moments::{
    compute_moment, compute_moments, compute_moments_color, neumann_factor, MomentOptions,
    MomentSet,
};
pub use radial::{
    chebyshev_u, chebyshev_u_recurrence, radial_table, transform_len, zrp_direct, zrp_fft,
    zrp_qrecursive, RadialMethod, RadialTable,
};
pub use metrics::{
    epsilon, epsilon1, epsilon2, error_report, stability_qf, stability_report, ErrorReport,
    StabilityReport,
};
pub use reconstruct::{
    crop, minmax_normalize, reconstruct, reconstruct_color, reconstruct_orders, ReconstructedImage,
};
pub use dedup::{candidate_groups, find_duplicates, zm_signature, DuplicateGroups, Signature, SignatureConfig};
pub use io::{load_image, read_moment_file, save_image, write_moment_file, LoadedImage, MomentFile};
