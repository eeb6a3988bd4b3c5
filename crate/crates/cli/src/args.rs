use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use zernike_core::synth::DEFAULT_SEED;
use zernike_core::{RadialMethod, ZernikeError};

#[derive(Debug, Parser)]
#[command(name = "zernike", version, about = "Zernike moments with FFT-evaluated radial polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute moments of an image and write a moment file.
    Compute(ComputeArgs),
    /// Rebuild an image from a moment file.
    Reconstruct(ReconstructArgs),
    /// Forward and inverse passes over a range of orders, reported as CSV.
    Roundtrip(RoundtripArgs),
    /// Orthogonality quality factor per method and order, reported as CSV.
    Stability(StabilityArgs),
    /// Timing of single-moment and full-set computations per image size.
    Bench(BenchArgs),
    /// Find groups of identical images in a directory.
    Dedup(DedupArgs),
    /// Write seeded synthetic test images.
    Synth(SynthArgs),
}

/// Inclusive `start:stop:step` range, or a single order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderRange {
    pub start: u32,
    pub stop: u32,
    pub step: u32,
}

impl OrderRange {
    pub fn orders(&self) -> Vec<u32> {
        (self.start..=self.stop).step_by(self.step as usize).collect()
    }
}

impl FromStr for OrderRange {
    type Err = ZernikeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ZernikeError::param(format!("invalid order range '{s}' (expected start:stop:step)"));
        let parts: Vec<&str> = s.split(':').collect();
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let range = match nums[..] {
            [n] => OrderRange { start: n, stop: n, step: 1 },
            [a, b] => OrderRange { start: a, stop: b, step: 1 },
            [a, b, c] => OrderRange { start: a, stop: b, step: c },
            _ => return Err(bad()),
        };
        if range.step == 0 || range.start > range.stop {
            return Err(bad());
        }
        Ok(range)
    }
}

fn parse_method(s: &str) -> Result<RadialMethod, String> {
    s.parse().map_err(|e: ZernikeError| e.to_string())
}

fn parse_range(s: &str) -> Result<OrderRange, String> {
    s.parse().map_err(|e: ZernikeError| e.to_string())
}

#[derive(Debug, Clone, Copy, Args)]
pub struct NormalizeFlag {
    /// Map reconstructions onto the stored band range.
    #[arg(long, overrides_with = "no_normalize")]
    normalize: bool,
    /// Keep raw reconstruction values.
    #[arg(long, overrides_with = "normalize")]
    no_normalize: bool,
}

impl NormalizeFlag {
    pub fn resolve(&self, default: bool) -> bool {
        if self.normalize {
            true
        } else if self.no_normalize {
            false
        } else {
            default
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Highest order n.
    #[arg(long)]
    pub order: u32,
    #[arg(long, default_value = "fft", value_parser = parse_method)]
    pub method: RadialMethod,
    #[arg(long)]
    pub neumann: bool,
    #[arg(long)]
    pub symmetry: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// Moment file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output image (png, bmp, tiff or pgm/ppm).
    #[arg(long)]
    pub output: PathBuf,
    /// Order cap; defaults to the highest stored order.
    #[arg(long)]
    pub order: Option<u32>,
    #[command(flatten)]
    pub normalize: NormalizeFlag,
}

#[derive(Debug, Clone, Args)]
pub struct RoundtripArgs {
    /// Input image; a seeded synthetic image is used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// CSV report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_parser = parse_range)]
    pub orders: OrderRange,
    /// Methods to compare (repeatable).
    #[arg(long = "method", value_parser = parse_method, default_values = ["fft", "qrec"])]
    pub methods: Vec<RadialMethod>,
    /// Run only with the Neumann factor instead of both with and without.
    #[arg(long)]
    pub neumann: bool,
    #[arg(long)]
    pub symmetry: bool,
    /// Measure error on normalized reconstructions (default: raw).
    #[command(flatten)]
    pub normalize: NormalizeFlag,
    /// Side of the synthetic image.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_parser = parse_range, default_value = "0:500:50")]
    pub orders: OrderRange,
    #[arg(long = "method", value_parser = parse_method, default_values = ["fft", "direct", "qrec"])]
    pub methods: Vec<RadialMethod>,
    #[arg(long, default_value_t = zernike_core::metrics::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Image sides, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [64usize, 128, 256, 512, 1024])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Order of the single timed moment and of the full set.
    #[arg(long, default_value_t = 20)]
    pub order: u32,
    #[arg(long, default_value = "fft", value_parser = parse_method)]
    pub method: RadialMethod,
    #[arg(long)]
    pub symmetry: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DedupArgs {
    /// Directory to scan (not recursive).
    #[arg(long)]
    pub input: PathBuf,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Number of signature orders.
    #[arg(long, default_value_t = zernike_core::dedup::DEFAULT_SIGNATURE_ORDERS)]
    pub order: u32,
    /// Decimal places kept per coefficient component.
    #[arg(long, default_value_t = zernike_core::dedup::DEFAULT_DECIMALS)]
    pub quantize: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Image path, or a directory when `--corpus` is given.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write an RGB image.
    #[arg(long)]
    pub color: bool,
    /// Write this many small random images instead of one test image.
    #[arg(long)]
    pub corpus: Option<usize>,
    /// Exact duplicate pairs planted in the corpus.
    #[arg(long, default_value_t = 0)]
    pub duplicates: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_ranges() {
        assert_eq!("10:50:20".parse::<OrderRange>().unwrap().orders(), vec![10, 30, 50]);
        assert_eq!("7".parse::<OrderRange>().unwrap().orders(), vec![7]);
        assert_eq!("0:3".parse::<OrderRange>().unwrap().orders(), vec![0, 1, 2, 3]);
        for bad in ["", "5:1", "1:5:0", "a:b", "1:2:3:4", "-1:3"] {
            assert!(bad.parse::<OrderRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn normalize_flag_resolution() {
        let cli = Cli::try_parse_from(["zernike", "reconstruct", "--input", "a", "--output", "b.png", "--no-normalize"]).unwrap();
        let Command::Reconstruct(r) = cli.command else { panic!() };
        assert!(!r.normalize.resolve(true));
        let cli = Cli::try_parse_from(["zernike", "reconstruct", "--input", "a", "--output", "b.png"]).unwrap();
        let Command::Reconstruct(r) = cli.command else { panic!() };
        assert!(r.normalize.resolve(true));
    }

    #[test]
    fn method_lists() {
        let cli = Cli::try_parse_from(["zernike", "stability", "--method", "fft", "--method", "qrec", "--orders", "0:10:5"]).unwrap();
        let Command::Stability(s) = cli.command else { panic!() };
        assert_eq!(s.methods, vec![RadialMethod::Fft, RadialMethod::QRecursive]);
        assert!(Cli::try_parse_from(["zernike", "stability", "--method", "foo"]).is_err());
    }
}
