use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use xclust_core::Linkage;
use xclust_server::{router, AppState, Config};

#[derive(Debug, Parser)]
#[command(name = "xclust-server", version, about = "HTTP API for explainable clustering sessions")]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "XCLUST_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Directory where published solution documents are written.
    #[arg(long, env = "XCLUST_SESSION_DIR")]
    session_dir: Option<PathBuf>,
    /// Linkage used when a session does not name one.
    #[arg(long, env = "XCLUST_LINKAGE", default_value = "single")]
    linkage: Linkage,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    if let Some(dir) = &args.session_dir {
        std::fs::create_dir_all(dir)?;
    }
    let state = Arc::new(AppState::new(Config {
        session_dir: args.session_dir,
        default_linkage: args.linkage,
    }));
    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
