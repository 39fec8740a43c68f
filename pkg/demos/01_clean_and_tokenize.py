"""Cleaning one OCR page: metadata stripping, de-hyphenation, tokens."""

import datetime

from vestnik.analyzer import CleanPage, RawPage, dehyphenate, strip_metadata, tokenize

BODY = """===META
scanner: drum-4
dpi: 300
===END
Народното събрание засѣдава
днесъ по новата желѣзо-
пѫтна линия отъ Пловдивъ."""

page = CleanPage.from_raw(
    RawPage(
        newspaper_id="марица",
        issue_date=datetime.date(1895, 3, 14),
        page_number=1,
        body=BODY,
    )
)

print("cleaned text:")
print(" ", page.text)
print()
print("tokens:")
for token in page.tokens:
    print(f"  {token.kind.value:12s} {token.surface!r:20s} [{token.start},{token.end})")

# the two cleaning steps are also usable on their own
print()
print("just stripped:", strip_metadata(BODY).splitlines()[:1])
print("just dehyphenated:", dehyphenate(["желѣзо-", "пѫтна", "линия"]))
print("token count:", len(tokenize(page.text)))
