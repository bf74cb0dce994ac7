use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;
use tracing::{debug, info, warn};

use graphbridge_core::session::{Session, SessionConfig};

pub const DEFAULT_PORT: u16 = 7341;
pub const PORT_ENV: &str = "GRAPHBRIDGE_PORT";

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Static client assets served under `/`.
    pub assets: Option<PathBuf>,
    /// Directory that `loadDataset` paths resolve against.
    pub data_dir: Option<PathBuf>,
}

pub fn router(options: ServeOptions) -> Router {
    let assets = options.assets.clone();
    let app = Router::new()
        .route("/ws", get(upgrade))
        .with_state(Arc::new(options));
    match assets {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

pub async fn serve(listener: TcpListener, options: ServeOptions) -> anyhow::Result<()> {
    info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(options)).await?;
    Ok(())
}

pub async fn bind(port: u16) -> anyhow::Result<TcpListener> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    Ok(TcpListener::bind(addr).await?)
}

async fn upgrade(ws: WebSocketUpgrade, State(options): State<Arc<ServeOptions>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| run_session(socket, options))
}

/// Messages are handled strictly in arrival order; each produces its events
/// before the next message is read.
async fn run_session(mut socket: WebSocket, options: Arc<ServeOptions>) {
    let mut session = Session::new(SessionConfig {
        base_dir: options.data_dir.clone(),
        ..SessionConfig::default()
    });
    debug!("session opened");
    while let Some(msg) = socket.recv().await {
        let text = match msg {
            Ok(Message::Text(t)) => t.to_string(),
            Ok(Message::Binary(b)) => String::from_utf8_lossy(&b).into_owned(),
            Ok(Message::Close(_)) => break,
            Ok(_) => continue,
            Err(e) => {
                warn!(error = %e, "socket error");
                break;
            }
        };
        for event in session.handle_text(&text) {
            if socket.send(Message::Text(event.to_json().into())).await.is_err() {
                return;
            }
        }
    }
    debug!("session closed");
}
