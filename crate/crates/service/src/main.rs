//! Serves the session API.
//!
//! Environment: `CHOIX_ADDR` (default `127.0.0.1:8080`), `CHOIX_DATA_DIR`
//! (snapshot directory, optional), `CHOIX_BUILD_TIMEOUT_SECS` (default 30),
//! `CHOIX_LP_TOL` (default 1e-9).

use std::time::Duration;

use choix::ToleranceConfig;
use choix_service::{router, AppState, ServiceConfig};

fn env_parse<T: std::str::FromStr>(name: &str) -> Result<Option<T>, String> {
    match std::env::var(name) {
        Ok(v) => v.parse().map(Some).map_err(|_| format!("{name}: cannot parse {v:?}")),
        Err(_) => Ok(None),
    }
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let addr = std::env::var("CHOIX_ADDR").unwrap_or_else(|_| "127.0.0.1:8080".into());
    let mut config = ServiceConfig::default();
    if let Some(secs) = env_parse::<f64>("CHOIX_BUILD_TIMEOUT_SECS")? {
        config.build_timeout = Duration::try_from_secs_f64(secs).map_err(|e| format!("CHOIX_BUILD_TIMEOUT_SECS: {e}"))?;
    }
    if let Some(tol) = env_parse::<f64>("CHOIX_LP_TOL")? {
        config.tolerance = ToleranceConfig::new(0.0, tol)?;
    }
    config.persist_dir = std::env::var_os("CHOIX_DATA_DIR").map(Into::into);

    let app = router(AppState::new(config)?);
    let listener = tokio::net::TcpListener::bind(&addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}
