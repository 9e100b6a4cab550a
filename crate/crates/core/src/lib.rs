//! Color edge detection with the quaternion Hardy filter.
//!
//! An RGB image is encoded as the pure-quaternion signal `r·i + g·j + b·k`,
//! moved to the frequency domain with the two-sided discrete quaternion
//! Fourier transform, multiplied by the Hardy filter gain, and brought back.
//! The vector part of the filtered signal feeds an improved Di Zenzo color
//! gradient; nonmaximum suppression and a global threshold produce the edge
//! map.
//!
//! ```
//! use qhf::{detect_edges, synth, DetectParams};
//!
//! let img = synth::house(64);
//! let edges = detect_edges(&img, &DetectParams::default()).unwrap();
//! assert!(edges.count() > 0);
//! ```

pub mod error;
pub mod eval;
pub mod fft;
pub mod gradient;
pub mod hardy;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod pipeline;
pub mod plane;
pub mod qft;
pub mod quaternion;
pub mod selftest;
pub mod synth;

pub use error::{Error, Result};
pub use hardy::{analytic_signal, apply_qhf, hardy_response, qhf_filter, HardyParams};
pub use pipeline::{
    detect_edges, detect_edges_with, Boundary, DetectParams, Detector, EdgeMap, FilterStage,
    RgbImage,
};
pub use plane::Plane;
pub use qft::{dqft, dqft_direct, idqft, signed_frequency, QuaternionImage, Spectrum};
pub use quaternion::Quaternion;
