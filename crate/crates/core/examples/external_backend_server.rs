//! Reference server for the external texture backend protocol.
//!
//! Serves `1 − MS-SSIM` (five scales) so results can be compared with the
//! three-scale builtin. Point an evaluation at it with
//! `--texture-backend external:127.0.0.1:7878`.
//!
//! cargo run --example external_backend_server -- [addr]

use std::net::{TcpListener, TcpStream};

use albedo_bench::imagecore::LinearImage;
use albedo_bench::perceptual::external::{read_request, write_reply};
use albedo_bench::perceptual::{MsSsim, PerceptualDistance};

fn serve(mut stream: TcpStream) -> albedo_bench::Result<()> {
    let metric = MsSsim {
        scales: 5,
        window_sigma: 1.5,
    };
    while let Some(req) = read_request(&mut stream)? {
        let to_img = |v: &[f32]| LinearImage::new(req.width, req.height, v.iter().map(|x| *x as f64).collect());
        let (a, b) = (to_img(&req.a)?, to_img(&req.b)?);
        // Too small for five scales: fall back to a single one.
        let d = metric.distance(&a, &b).or_else(|_| {
            MsSsim {
                scales: 1,
                window_sigma: 1.5,
            }
            .distance(&a, &b)
        })?;
        write_reply(&mut stream, d)?;
    }
    Ok(())
}

fn main() -> std::io::Result<()> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:7878".into());
    let listener = TcpListener::bind(&addr)?;
    eprintln!("listening on {}", listener.local_addr()?);
    for stream in listener.incoming() {
        let stream = stream?;
        std::thread::spawn(move || {
            if let Err(e) = serve(stream) {
                eprintln!("connection closed: {e}");
            }
        });
    }
    Ok(())
}
