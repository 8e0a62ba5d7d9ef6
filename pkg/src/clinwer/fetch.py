"""Downloads biomedical title/abstract records via the NCBI E-utilities.

The HTTP transport and the sleep function are injectable so tests can
drive the adapter offline. Fetched records are written in the raw
line-delimited format and still need `clean` before dataset generation.
"""

from __future__ import annotations

import json
import logging
import time
import xml.etree.ElementTree as ET
from collections.abc import Callable, Sequence
from pathlib import Path

from .errors import DataError

logger = logging.getLogger(__name__)

EUTILS_BASE = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils"

DEFAULT_TERMS = (
    "gastrointestinal symptoms",
    "diagnosis",
    "clinical",
    "examination",
    "patient",
)

# NCBI caps unauthenticated clients at 3 requests per second.
DEFAULT_RATE_LIMIT = 3.0

_FETCH_BATCH = 200

HttpGet = Callable[[str, dict[str, str]], str]


def _requests_get(url: str, params: dict[str, str]) -> str:
    import requests

    resp = requests.get(url, params=params, timeout=60)
    resp.raise_for_status()
    return resp.text


def build_query(terms: Sequence[str]) -> str:
    """Join search terms into a single conjunctive query string."""
    cleaned = [t.strip() for t in terms if t.strip()]
    if not cleaned:
        raise ValueError("at least one non-empty search term is required")
    return " AND ".join(cleaned)


def fetch_pubmed(
    out_path: str | Path,
    terms: Sequence[str] = DEFAULT_TERMS,
    max_records: int = 100,
    rate_limit: float = DEFAULT_RATE_LIMIT,
    email: str | None = None,
    api_key: str | None = None,
    http_get: HttpGet | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> int:
    """Search for matching articles and write raw records to `out_path`.

    Records lacking a title or abstract are skipped with a warning, so
    the number written may be lower than `max_records`.

    Args:
        max_records: upper bound on articles requested from the search.
        rate_limit: maximum requests per second; consecutive calls are
            spaced by sleeping 1/rate_limit between them.
        http_get: transport taking (url, params) and returning the
            response body; defaults to a requests-backed implementation.

    Returns:
        Number of records written.

    Raises:
        DataError: the service response could not be interpreted.
    """
    if max_records <= 0:
        raise ValueError("max_records must be positive")
    if rate_limit <= 0:
        raise ValueError("rate_limit must be positive")
    get = http_get if http_get is not None else _requests_get

    common: dict[str, str] = {"db": "pubmed"}
    if email:
        common["email"] = email
    if api_key:
        common["api_key"] = api_key

    search_params = dict(common)
    search_params.update(
        {
            "term": build_query(terms),
            "retmax": str(max_records),
            "retmode": "json",
            "sort": "pub_date",
        }
    )
    body = get(f"{EUTILS_BASE}/esearch.fcgi", search_params)
    try:
        payload = json.loads(body)
        pmids: list[str] = list(payload["esearchresult"]["idlist"])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DataError(f"unexpected search response: {exc}") from exc

    records: list[dict[str, str]] = []
    for start in range(0, len(pmids), _FETCH_BATCH):
        batch = pmids[start : start + _FETCH_BATCH]
        sleep(1.0 / rate_limit)
        fetch_params = dict(common)
        fetch_params.update(
            {
                "id": ",".join(batch),
                "retmode": "xml",
                "rettype": "abstract",
            }
        )
        xml_body = get(f"{EUTILS_BASE}/efetch.fcgi", fetch_params)
        records.extend(_parse_efetch_xml(xml_body))

    records.sort(key=lambda r: r["pmid"])
    out = Path(out_path)
    with out.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    logger.info("fetched %d records (%d requested)", len(records), max_records)
    return len(records)


def _parse_efetch_xml(body: str) -> list[dict[str, str]]:
    try:
        root = ET.fromstring(body)
    except ET.ParseError as exc:
        raise DataError(f"unexpected fetch response: {exc}") from exc
    out: list[dict[str, str]] = []
    for article in root.iter("PubmedArticle"):
        pmid_el = article.find(".//PMID")
        title_el = article.find(".//ArticleTitle")
        pmid = (pmid_el.text or "").strip() if pmid_el is not None else ""
        # itertext flattens inline markup like italics inside titles
        title = "".join(title_el.itertext()).strip() if title_el is not None else ""
        sections = [
            "".join(el.itertext()).strip() for el in article.findall(".//Abstract/AbstractText")
        ]
        abstract = " ".join(s for s in sections if s).strip()
        if not pmid:
            logger.warning("skipping article with no id")
            continue
        if not title or not abstract:
            logger.warning("skipping %s: missing title or abstract", pmid)
            continue
        out.append({"pmid": pmid, "title": title, "abstract": abstract})
    return out
