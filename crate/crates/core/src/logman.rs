//! Verbosity- and rank-gated log output.
//!
//! A [`LogManager`] owns a [`LogConfig`] and the open sinks. A record is
//! written only when the process rank equals the emitting rank and the
//! level reaches the threshold. Every line of a multi-line message is
//! indented, and all sinks receive the same bytes.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::stringify::Newline;

pub const ENV_LEVEL: &str = "STRFMT_LOG_LEVEL";
pub const ENV_RANK: &str = "STRFMT_LOG_RANK";

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("at least one sink is required")]
    NoSinks,
    #[error("indentation is already at level 0")]
    IndentUnderflow,
    #[error("cannot open log file {path}: {source}")]
    Unwritable {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("unknown log level '{0}' (expected debug, info or warning)")]
    UnknownLevel(String),
    #[error("invalid value for {key}: '{value}'")]
    InvalidValue { key: String, value: String },
    #[error("line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("cannot read config file {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogLevel {
    Debug,
    Info,
    Warning,
}

impl LogLevel {
    pub const ALL: [LogLevel; 3] = [LogLevel::Debug, LogLevel::Info, LogLevel::Warning];

    pub fn name(self) -> &'static str {
        match self {
            LogLevel::Debug => "debug",
            LogLevel::Info => "info",
            LogLevel::Warning => "warning",
        }
    }
}

impl fmt::Display for LogLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogLevel {
    type Err = LogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "debug" => Ok(LogLevel::Debug),
            "info" => Ok(LogLevel::Info),
            "warning" | "warn" => Ok(LogLevel::Warning),
            _ => Err(LogError::UnknownLevel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SinkSpec {
    Terminal,
    File(PathBuf),
}

impl fmt::Display for SinkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SinkSpec::Terminal => f.write_str("terminal"),
            SinkSpec::File(path) => write!(f, "file {}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConfig {
    pub threshold: LogLevel,
    pub indent_level: usize,
    pub indent_unit: String,
    pub sinks: Vec<SinkSpec>,
    pub own_rank: usize,
    pub emit_rank: usize,
    pub newline: Newline,
    /// Upper bound on message characters per record, excluding indentation.
    pub max_message_length: Option<usize>,
    pub timestamps: bool,
    pub level_tags: bool,
}

impl Default for LogConfig {
    fn default() -> Self {
        LogConfig {
            threshold: LogLevel::Info,
            indent_level: 0,
            indent_unit: "  ".to_string(),
            sinks: vec![SinkSpec::Terminal],
            own_rank: 0,
            emit_rank: 0,
            newline: Newline::Lf,
            max_message_length: None,
            timestamps: false,
            level_tags: false,
        }
    }
}

impl LogConfig {
    /// Whether a record at `level` is emitted by this process.
    pub fn should_emit(&self, level: LogLevel) -> bool {
        self.own_rank == self.emit_rank && level >= self.threshold
    }

    pub fn set_indent(&mut self, n: usize) -> &mut Self {
        self.indent_level = n;
        self
    }

    pub fn push_indent(&mut self) -> &mut Self {
        self.indent_level += 1;
        self
    }

    pub fn pop_indent(&mut self) -> Result<&mut Self, LogError> {
        if self.indent_level == 0 {
            return Err(LogError::IndentUnderflow);
        }
        self.indent_level -= 1;
        Ok(self)
    }

    /// Formats a record without the trailing record separator: the message
    /// is bounded by `max_message_length`, then every line gets the
    /// optional timestamp and level tag followed by the indentation.
    pub fn format_record(&self, level: LogLevel, msg: &str) -> String {
        let payload: &str = match self.max_message_length {
            Some(max) => match msg.char_indices().nth(max) {
                Some((cut, _)) => &msg[..cut],
                None => msg,
            },
            None => msg,
        };

        let mut prefix = String::new();
        if self.timestamps {
            prefix.push_str(
                &chrono::Local::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, false),
            );
            prefix.push(' ');
        }
        if self.level_tags {
            prefix.push_str(&format!("[{}] ", level.name().to_ascii_uppercase()));
        }
        prefix.push_str(&self.indent_unit.repeat(self.indent_level));

        payload
            .split('\n')
            .map(|line| format!("{prefix}{}", line.strip_suffix('\r').unwrap_or(line)))
            .collect::<Vec<_>>()
            .join(self.newline.as_str())
    }

    /// Applies `STRFMT_LOG_LEVEL` and `STRFMT_LOG_RANK` from the process
    /// environment.
    pub fn apply_env(self) -> Result<Self, LogError> {
        self.apply_env_from(|key| std::env::var(key).ok())
    }

    /// Like [`LogConfig::apply_env`] with an injectable lookup.
    pub fn apply_env_from(
        mut self,
        lookup: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, LogError> {
        if let Some(level) = lookup(ENV_LEVEL) {
            self.threshold = level.parse()?;
        }
        if let Some(rank) = lookup(ENV_RANK) {
            self.own_rank = rank.trim().parse().map_err(|_| LogError::InvalidValue {
                key: ENV_RANK.to_string(),
                value: rank.clone(),
            })?;
        }
        Ok(self)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self, LogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LogError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text)
    }

    /// Parses `key=value` lines. Blank lines and lines starting with `#`
    /// are skipped; values may be wrapped in double quotes to keep blanks.
    ///
    /// Keys: `level`, `sinks` (`terminal`, `file`, `both` or a comma list),
    /// `file`, `indent_unit`, `emit_rank`, `timestamps`, `newline`
    /// (`lf`/`crlf`), `max_message_length`, `level_tags`.
    pub fn from_config_str(text: &str) -> Result<Self, LogError> {
        let mut cfg = LogConfig::default();
        let mut want_terminal = true;
        let mut want_file = false;
        let mut file: Option<PathBuf> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| LogError::Config {
                line: line_no,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let key = key.trim();
            let value = unquote(value.trim());
            let invalid = || err(format!("invalid value for {key}: '{value}'"));
            match key {
                "level" => cfg.threshold = value.parse().map_err(|_| invalid())?,
                "sinks" => {
                    want_terminal = false;
                    want_file = false;
                    for part in value.split(',').map(str::trim) {
                        match part {
                            "terminal" => want_terminal = true,
                            "file" => want_file = true,
                            "both" => {
                                want_terminal = true;
                                want_file = true;
                            }
                            _ => return Err(invalid()),
                        }
                    }
                }
                "file" => file = Some(PathBuf::from(value)),
                "indent_unit" => cfg.indent_unit = value.to_string(),
                "emit_rank" => cfg.emit_rank = value.parse().map_err(|_| invalid())?,
                "timestamps" => cfg.timestamps = parse_flag(value).ok_or_else(invalid)?,
                "level_tags" => cfg.level_tags = parse_flag(value).ok_or_else(invalid)?,
                "newline" => cfg.newline = value.parse().map_err(|_| invalid())?,
                "max_message_length" => {
                    let n: usize = value.parse().map_err(|_| invalid())?;
                    if n == 0 {
                        return Err(invalid());
                    }
                    cfg.max_message_length = Some(n);
                }
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }

        cfg.sinks.clear();
        if want_terminal {
            cfg.sinks.push(SinkSpec::Terminal);
        }
        if want_file {
            let path = file.ok_or_else(|| LogError::Config {
                line: 0,
                reason: "sinks include file but no file= key is given".to_string(),
            })?;
            cfg.sinks.push(SinkSpec::File(path));
        }
        if cfg.sinks.is_empty() {
            return Err(LogError::NoSinks);
        }
        Ok(cfg)
    }
}

fn unquote(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

fn parse_flag(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// In-memory sink target, handy for capturing terminal output.
#[derive(Debug, Clone, Default)]
pub struct SharedBuffer(Arc<Mutex<Vec<u8>>>);

impl SharedBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contents(&self) -> Vec<u8> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.contents()).into_owned()
    }
}

impl Write for SharedBuffer {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .extend_from_slice(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

type Writer = Box<dyn Write + Send>;

struct OpenSink {
    spec: SinkSpec,
    writer: Mutex<Writer>,
}

#[derive(Debug)]
pub struct SinkFailure {
    pub sink: SinkSpec,
    pub error: io::Error,
}

/// Outcome of [`LogManager::log_write`]. Sink failures are collected here
/// instead of being raised.
#[derive(Debug, Default)]
pub struct EmitResult {
    pub emitted: bool,
    pub failures: Vec<SinkFailure>,
}

impl EmitResult {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct LogManager {
    config: LogConfig,
    sinks: Vec<OpenSink>,
    terminal: Arc<dyn Fn() -> Writer + Send + Sync>,
}

impl fmt::Debug for LogManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogManager")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl LogManager {
    /// Opens the configured sinks; the terminal sink writes to stdout.
    pub fn new(config: LogConfig) -> Result<Self, LogError> {
        Self::with_terminal_factory(config, Arc::new(|| Box::new(io::stdout()) as Writer))
    }

    /// Routes the terminal sink to `writer` instead of stdout.
    pub fn with_terminal<W: Write + Send + Sync + Clone + 'static>(
        config: LogConfig,
        writer: W,
    ) -> Result<Self, LogError> {
        Self::with_terminal_factory(config, Arc::new(move || Box::new(writer.clone()) as Writer))
    }

    fn with_terminal_factory(
        config: LogConfig,
        terminal: Arc<dyn Fn() -> Writer + Send + Sync>,
    ) -> Result<Self, LogError> {
        let mut manager = LogManager {
            sinks: Vec::new(),
            terminal,
            config: LogConfig {
                sinks: Vec::new(),
                ..config.clone()
            },
        };
        manager.set_sinks(config.sinks)?;
        Ok(manager)
    }

    pub fn config(&self) -> &LogConfig {
        &self.config
    }

    /// Mutable access for threshold, rank or indentation changes. Sinks are
    /// changed through [`LogManager::set_sinks`].
    pub fn config_mut(&mut self) -> &mut LogConfig {
        &mut self.config
    }

    /// Replaces the sinks. Files are opened for appending; on error the
    /// previous sinks stay in place.
    pub fn set_sinks(&mut self, sinks: Vec<SinkSpec>) -> Result<(), LogError> {
        if sinks.is_empty() {
            return Err(LogError::NoSinks);
        }
        let mut opened = Vec::with_capacity(sinks.len());
        for spec in &sinks {
            let writer: Writer = match spec {
                SinkSpec::Terminal => (self.terminal)(),
                SinkSpec::File(path) => Box::new(open_log_file(path)?),
            };
            opened.push(OpenSink {
                spec: spec.clone(),
                writer: Mutex::new(writer),
            });
        }
        self.sinks = opened;
        self.config.sinks = sinks;
        Ok(())
    }

    pub fn set_indent(&mut self, n: usize) {
        self.config.set_indent(n);
    }

    pub fn push_indent(&mut self) {
        self.config.push_indent();
    }

    pub fn pop_indent(&mut self) -> Result<(), LogError> {
        self.config.pop_indent().map(|_| ())
    }

    /// Writes one record to every sink if the rank and level gates pass.
    pub fn log_write(&self, level: LogLevel, msg: &str) -> EmitResult {
        if !self.config.should_emit(level) {
            return EmitResult::default();
        }
        let mut record = self.config.format_record(level, msg);
        record.push_str(self.config.newline.as_str());

        let mut result = EmitResult {
            emitted: true,
            failures: Vec::new(),
        };
        for sink in &self.sinks {
            let mut writer = sink.writer.lock().unwrap_or_else(|e| e.into_inner());
            if let Err(error) = writer
                .write_all(record.as_bytes())
                .and_then(|()| writer.flush())
            {
                result.failures.push(SinkFailure {
                    sink: sink.spec.clone(),
                    error,
                });
            }
        }
        result
    }

    pub fn debug(&self, msg: &str) -> EmitResult {
        self.log_write(LogLevel::Debug, msg)
    }

    pub fn info(&self, msg: &str) -> EmitResult {
        self.log_write(LogLevel::Info, msg)
    }

    pub fn warning(&self, msg: &str) -> EmitResult {
        self.log_write(LogLevel::Warning, msg)
    }
}

fn open_log_file(path: &Path) -> Result<File, LogError> {
    OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| LogError::Unwritable {
            path: path.to_path_buf(),
            source,
        })
}
