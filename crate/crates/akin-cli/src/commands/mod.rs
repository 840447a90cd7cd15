//! One runner per subcommand. Each writes its artifacts and returns nothing else.

mod dispersion;
mod landau;
mod mode;
mod poincare;
mod report;
mod simulate;
mod sweep;

pub use report::{ReportRow, TheoryRow};
pub use sweep::SweepRow;

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::CliError;
use crate::output::Artifacts;

pub const EFFECTIVE_CONFIG: &str = "effective_config.toml";

pub fn run(kind: CommandKind, cfg: &ExperimentConfig, out: &mut Artifacts) -> Result<(), CliError> {
    match kind {
        CommandKind::Dispersion => dispersion::run(cfg, out),
        CommandKind::Landau => landau::run(cfg, out),
        CommandKind::Mode => mode::run(cfg, out),
        CommandKind::Sweep => sweep::run(cfg, out),
        CommandKind::Simulate => simulate::run(cfg, out),
        CommandKind::Poincare => poincare::run(cfg, out),
        CommandKind::Report => report::run(cfg, out),
    }
}
