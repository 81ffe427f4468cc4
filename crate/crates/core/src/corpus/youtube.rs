//! Adapter for the raw `videos.list` response shape of the public video-data
//! API. Flattens `items[]` into [`VideoRecord`]s; performs no network I/O.
//!
//! The API encodes counts as decimal strings and durations as ISO-8601.

use serde::Deserialize;

use super::{parse_iso8601_duration, parse_object, Definition, VideoRecord};
use crate::{Error, Result};

#[derive(Deserialize)]
struct ListResponse {
    #[serde(default)]
    items: Vec<Item>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Item {
    id: IdField,
    #[serde(default)]
    snippet: Snippet,
    #[serde(default)]
    content_details: ContentDetails,
    #[serde(default)]
    statistics: Statistics,
}

// `videos.list` returns a plain id; `search.list` nests it under `videoId`.
#[derive(Deserialize)]
#[serde(untagged)]
enum IdField {
    Plain(String),
    Nested {
        #[serde(rename = "videoId")]
        video_id: String,
    },
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct Snippet {
    #[serde(default)]
    channel_id: String,
    published_at: Option<chrono::DateTime<chrono::Utc>>,
    #[serde(default)]
    title: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    tags: Vec<String>,
}

#[derive(Deserialize, Default)]
struct ContentDetails {
    duration: Option<String>,
    definition: Option<Definition>,
    caption: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct Statistics {
    view_count: Option<String>,
    like_count: Option<String>,
    dislike_count: Option<String>,
    comment_count: Option<String>,
}

fn count(context: &str, field: &str, raw: Option<String>) -> Result<Option<u64>> {
    raw.map(|s| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| Error::schema(context, format!("{field} {s:?} is not a non-negative integer")))
    })
    .transpose()
}

/// Flattens one API response body into video records, in response order.
pub fn parse_list_response(json_text: &str) -> Result<Vec<VideoRecord>> {
    const CONTEXT: &str = "api response";
    let response: ListResponse = parse_object(CONTEXT, json_text)?;
    response
        .items
        .into_iter()
        .map(|item| {
            let video_id = match item.id {
                IdField::Plain(id) | IdField::Nested { video_id: id } => id,
            };
            if video_id.trim().is_empty() {
                return Err(Error::schema(CONTEXT, "item without a video id"));
            }
            let duration_s = match item.content_details.duration.as_deref() {
                None => 0,
                Some(d) => parse_iso8601_duration(d)
                    .ok_or_else(|| Error::schema(CONTEXT, format!("invalid duration {d:?}")))?,
            };
            let s = item.statistics;
            Ok(VideoRecord {
                video_id,
                channel_id: item.snippet.channel_id,
                published_at: item.snippet.published_at,
                title: item.snippet.title,
                description: item.snippet.description,
                tags: item.snippet.tags,
                duration_s,
                definition: item.content_details.definition.unwrap_or_default(),
                caption_available: item.content_details.caption.as_deref() == Some("true"),
                view_count: count(CONTEXT, "viewCount", s.view_count)?,
                like_count: count(CONTEXT, "likeCount", s.like_count)?,
                dislike_count: count(CONTEXT, "dislikeCount", s.dislike_count)?,
                comment_count: count(CONTEXT, "commentCount", s.comment_count)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RESPONSE: &str = r#"{
      "kind": "youtube#videoListResponse",
      "items": [
        {
          "kind": "youtube#video",
          "id": "vEtZh2Zi9TU",
          "snippet": {
            "publishedAt": "2018-05-02T14:00:00Z",
            "channelId": "UCabc",
            "title": "Colorectal cancer symptoms and screening guidelines",
            "description": "Learn about symptoms.",
            "tags": ["colon", "screening"]
          },
          "contentDetails": {"duration": "PT3M28S", "definition": "hd", "caption": "true"},
          "statistics": {"viewCount": "1200", "likeCount": "30", "commentCount": "4"}
        },
        {"id": {"kind": "youtube#video", "videoId": "SExZiM3DQDw"}, "snippet": {"title": "031 Colonoscopy insertion technique"}}
      ]
    }"#;

    #[test]
    fn flattens_items() {
        let records = parse_list_response(RESPONSE).unwrap();
        assert_eq!(records.len(), 2);
        let first = &records[0];
        assert_eq!(first.video_id, "vEtZh2Zi9TU");
        assert_eq!(first.duration_s, 208);
        assert_eq!(first.definition, Definition::Hd);
        assert!(first.caption_available);
        assert_eq!(first.view_count, Some(1200));
        assert_eq!(first.dislike_count, None);
        assert_eq!(first.tags, vec!["colon", "screening"]);
        assert_eq!(records[1].video_id, "SExZiM3DQDw");
        assert_eq!(records[1].view_count, None);
    }

    #[test]
    fn bad_count_is_schema_error() {
        let body = r#"{"items":[{"id":"x","statistics":{"viewCount":"-4"}}]}"#;
        assert!(matches!(parse_list_response(body), Err(Error::Schema { .. })));
    }
}
