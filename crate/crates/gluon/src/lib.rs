//! File formats, reports and the command-line interface on top of
//! [`gluon_core`].
//!
//! - [`text`]: graph blocks and combination files,
//! - [`sdpa`]: SDPA sparse problems and CSDP-style solutions,
//! - [`certfile`]: sum-of-squares certificate files,
//! - [`report`]: run reports as JSON or text,
//! - [`cli`]: the `gluon` command.

pub mod certfile;
pub mod cli;
pub mod report;
pub mod sdpa;
pub mod text;
