use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use draftcoach_core::analytics::AnalyticsError;
use draftcoach_core::draft::DraftError;
use draftcoach_core::markov::MarkovError;
use draftcoach_core::mcts::MctsError;

/// Body of every failed request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    /// Draft rule broken, when the failure is a rule violation.
    pub rule: Option<String>,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
#[error("{code}: {message}")]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub rule: Option<&'static str>,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, rule: None, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn model_missing(what: &str) -> Self {
        Self::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "model_missing",
            format!("no {what} loaded; start the server with the matching flag"),
        )
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code.to_string(),
            rule: self.rule.map(str::to_string),
            message: self.message.clone(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body())).into_response()
    }
}

impl From<DraftError> for ApiError {
    fn from(e: DraftError) -> Self {
        let msg = e.to_string();
        match e {
            DraftError::RuleViolation { rule, .. } => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                code: "rule_violation",
                rule: Some(rule.as_str()),
                message: msg,
            },
            DraftError::Terminal => Self::new(StatusCode::CONFLICT, "round_complete", msg),
            DraftError::NotTerminal { .. } => Self::new(StatusCode::CONFLICT, "round_not_finished", msg),
            DraftError::SeriesOver => Self::new(StatusCode::CONFLICT, "series_over", msg),
            DraftError::MalformedToken { .. } | DraftError::InvalidTemplate(_) => {
                Self::new(StatusCode::BAD_REQUEST, "invalid_template", msg)
            }
            DraftError::InvalidSeries(_) => Self::new(StatusCode::BAD_REQUEST, "invalid_series", msg),
        }
    }
}

impl From<MctsError> for ApiError {
    fn from(e: MctsError) -> Self {
        let msg = e.to_string();
        match e {
            MctsError::WrongTurn { .. } => Self::new(
                StatusCode::CONFLICT,
                "wrong_turn",
                format!("{msg}; use /recommend on our turns and /predict on the opponent's"),
            ),
            MctsError::NoLegalAction => Self::new(StatusCode::CONFLICT, "no_legal_action", msg),
            MctsError::InvalidConfig(_) | MctsError::DepthTooLarge { .. } => {
                Self::new(StatusCode::BAD_REQUEST, "invalid_config", msg)
            }
            MctsError::NotTerminal { .. } => Self::new(StatusCode::BAD_REQUEST, "draft_not_finished", msg),
            MctsError::Draft(d) => d.into(),
            MctsError::Markov(m) => m.into(),
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", msg),
        }
    }
}

impl From<MarkovError> for ApiError {
    fn from(e: MarkovError) -> Self {
        match e {
            MarkovError::Draft(d) => d.into(),
            MarkovError::EmptyMask => Self::new(StatusCode::CONFLICT, "no_legal_action", e.to_string()),
            other => Self::new(StatusCode::BAD_REQUEST, "model_mismatch", other.to_string()),
        }
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        let code = match e {
            AnalyticsError::UnknownPlayer(_) => "unknown_player",
            AnalyticsError::EmptyWindow { .. } => "empty_window",
            AnalyticsError::ZeroSupport => "bad_request",
        };
        let status = match e {
            AnalyticsError::UnknownPlayer(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, code, e.to_string())
    }
}

/// `Json` extractor whose rejections use the structured error body.
pub struct ApiJson<T>(pub T);

impl<S, T> axum::extract::FromRequest<S> for ApiJson<T>
where
    axum::Json<T>: axum::extract::FromRequest<S, Rejection = axum::extract::rejection::JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: axum::extract::Request, state: &S) -> Result<Self, Self::Rejection> {
        match axum::Json::<T>::from_request(req, state).await {
            Ok(axum::Json(v)) => Ok(ApiJson(v)),
            Err(e) => Err(ApiError::new(e.status(), "bad_request", e.body_text())),
        }
    }
}

/// `Query` extractor whose rejections use the structured error body.
pub struct ApiQuery<T>(pub T);

impl<S, T> axum::extract::FromRequestParts<S> for ApiQuery<T>
where
    T: serde::de::DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut axum::http::request::Parts, state: &S) -> Result<Self, Self::Rejection> {
        match axum::extract::Query::<T>::from_request_parts(parts, state).await {
            Ok(axum::extract::Query(v)) => Ok(ApiQuery(v)),
            Err(e) => Err(ApiError::new(e.status(), "bad_request", e.body_text())),
        }
    }
}
