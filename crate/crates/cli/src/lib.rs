//! Documents, reports and figures for the `ifsx` command-line tool.

pub mod commands;
pub mod document;
pub mod render;
pub mod report;

pub use commands::{run, Cli, CliError, Outcome};
pub use document::{parse_document, serialize_document, DocumentError, IfsDocument};
pub use render::render_svg;
pub use report::AnalysisReport;
