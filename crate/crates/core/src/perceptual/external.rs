//! Wire protocol for an out-of-process perceptual backend.
//!
//! One request per crop pair over a persistent TCP connection. All integers
//! are little-endian `u32`, all samples little-endian `f32`:
//!
//! ```text
//! magic   "TXD1"                      4 bytes
//! length  bytes that follow           u32
//! width                               u32
//! height                              u32
//! crop a  width*height*3 samples, RGB interleaved, row-major
//! crop b  same layout
//! ```
//!
//! The reply is one little-endian `f64` holding the distance. A backend must
//! return 0 (within 1e-5) for identical crops.

use std::io::{Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::sync::Mutex;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::imagecore::LinearImage;

use super::{check_same_size, PerceptualDistance};

pub const MAGIC: &[u8; 4] = b"TXD1";
const CONNECT_TIMEOUT: Duration = Duration::from_secs(5);
const IO_TIMEOUT: Duration = Duration::from_secs(120);

/// Serializes a request for the crop pair.
pub fn encode_request(a: &LinearImage, b: &LinearImage) -> Result<Vec<u8>> {
    check_same_size(a, b)?;
    let (w, h) = a.dims();
    let samples = w * h * 3;
    let length = 8 + 2 * samples * 4;
    let length = u32::try_from(length).map_err(|_| Error::Backend(format!("crop {w}x{h} too large")))?;
    let mut out = Vec::with_capacity(8 + length as usize);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&length.to_le_bytes());
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    for v in a.data().iter().chain(b.data()) {
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    Ok(out)
}

/// A decoded request: width, height and the two crops as `f32` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub width: usize,
    pub height: usize,
    pub a: Vec<f32>,
    pub b: Vec<f32>,
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

/// Reads one request from a stream; the server half of the protocol.
/// Returns `Ok(None)` on a clean end of stream.
pub fn read_request(r: &mut impl Read) -> Result<Option<Request>> {
    let mut magic = [0u8; 4];
    match r.read_exact(&mut magic) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(Error::Backend(e.to_string())),
    }
    if &magic != MAGIC {
        return Err(Error::Backend(format!("bad magic {magic:?}")));
    }
    let io = |e: std::io::Error| Error::Backend(e.to_string());
    let length = read_u32(r).map_err(io)? as usize;
    let width = read_u32(r).map_err(io)? as usize;
    let height = read_u32(r).map_err(io)? as usize;
    let samples = width * height * 3;
    if length != 8 + 2 * samples * 4 {
        return Err(Error::Backend(format!(
            "length {length} inconsistent with {width}x{height}"
        )));
    }
    let mut body = vec![0u8; 2 * samples * 4];
    r.read_exact(&mut body).map_err(io)?;
    let floats: Vec<f32> = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    let (a, b) = floats.split_at(samples);
    Ok(Some(Request {
        width,
        height,
        a: a.to_vec(),
        b: b.to_vec(),
    }))
}

pub fn write_reply(w: &mut impl Write, distance: f64) -> Result<()> {
    w.write_all(&distance.to_le_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::Backend(e.to_string()))
}

/// Client for an external backend. Connections are pooled so that each
/// concurrent caller holds its own session.
pub struct ExternalBackend {
    addr: String,
    pool: Mutex<Vec<TcpStream>>,
}

impl ExternalBackend {
    /// Connects once to check the endpoint is reachable.
    pub fn connect(addr: &str) -> Result<Self> {
        let backend = Self {
            addr: addr.to_string(),
            pool: Mutex::new(Vec::new()),
        };
        let stream = backend.open()?;
        backend.pool.lock().expect("pool lock").push(stream);
        Ok(backend)
    }

    pub fn addr(&self) -> &str {
        &self.addr
    }

    fn open(&self) -> Result<TcpStream> {
        let addrs = self
            .addr
            .to_socket_addrs()
            .map_err(|e| Error::Backend(format!("{}: {e}", self.addr)))?;
        let mut last = None;
        for a in addrs {
            match TcpStream::connect_timeout(&a, CONNECT_TIMEOUT) {
                Ok(s) => {
                    s.set_read_timeout(Some(IO_TIMEOUT)).ok();
                    s.set_write_timeout(Some(IO_TIMEOUT)).ok();
                    s.set_nodelay(true).ok();
                    return Ok(s);
                }
                Err(e) => last = Some(e),
            }
        }
        Err(Error::Backend(match last {
            Some(e) => format!("{}: {e}", self.addr),
            None => format!("{}: no address resolved", self.addr),
        }))
    }

    fn round_trip(stream: &mut TcpStream, request: &[u8]) -> std::io::Result<f64> {
        stream.write_all(request)?;
        let mut buf = [0u8; 8];
        stream.read_exact(&mut buf)?;
        Ok(f64::from_le_bytes(buf))
    }
}

impl PerceptualDistance for ExternalBackend {
    fn id(&self) -> String {
        format!("external:{}", self.addr)
    }

    fn distance(&self, a: &LinearImage, b: &LinearImage) -> Result<f64> {
        let request = encode_request(a, b)?;
        let pooled = self.pool.lock().expect("pool lock").pop();
        let mut stream = match pooled {
            Some(s) => s,
            None => self.open()?,
        };
        let d = Self::round_trip(&mut stream, &request).map_err(|e| Error::Backend(format!("{}: {e}", self.addr)))?;
        if !d.is_finite() || d < 0.0 {
            return Err(Error::Backend(format!("backend returned invalid distance {d}")));
        }
        self.pool.lock().expect("pool lock").push(stream);
        Ok(d)
    }
}
