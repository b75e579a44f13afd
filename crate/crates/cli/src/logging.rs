use std::sync::OnceLock;

/// Verbosity is controlled by the BICONS_LOG environment variable:
/// `quiet` suppresses everything, `info` (the default) prints progress
/// lines, `debug` adds numerical detail. All log output goes to stderr so
/// stdout stays machine-readable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Quiet,
    Info,
    Debug,
}

fn level() -> Level {
    static LEVEL: OnceLock<Level> = OnceLock::new();
    *LEVEL.get_or_init(|| match std::env::var("BICONS_LOG").as_deref() {
        Ok("quiet") => Level::Quiet,
        Ok("debug") => Level::Debug,
        _ => Level::Info,
    })
}

pub fn info(message: impl AsRef<str>) {
    if level() >= Level::Info {
        eprintln!("[info] {}", message.as_ref());
    }
}

pub fn debug(message: impl AsRef<str>) {
    if level() >= Level::Debug {
        eprintln!("[debug] {}", message.as_ref());
    }
}
