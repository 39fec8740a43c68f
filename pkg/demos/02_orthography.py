"""Converting between modern and pre-1945 spellings, both directions."""

from vestnik.lexicon import Lexicon
from vestnik.orthography import (
    OrthographyVersion,
    YatLexicon,
    convert_lexicon,
    detect_version,
    to_historical,
    to_modern,
)

yat = YatLexicon({"хляб": "хлѣбъ", "мярка": "мѣрка", "ръка": "рѫка"})

print("version detection:")
for text in ["вода и хляб за всички", "Народното събрание засѣдава днесъ"]:
    version, confidence = detect_version(text)
    print(f"  {confidence:.2f} {version.value:10s} {text!r}")

print()
print("historical -> modern (deterministic):")
for word in ["миръ", "хлѣбъ", "рѫка", "вѣкъ", "царь", "міръ"]:
    print(f"  {word:8s} -> {to_modern(word, yat_lexicon=yat)}")

print()
print("modern -> historical (variant sets, preferred first):")
for word in ["мир", "две", "ръка", "хляб", "вода"]:
    variants = to_historical(word, yat_lexicon=yat)
    print(f"  {word:6s} -> {list(variants)}")

print()
modern = Lexicon(OrthographyVersion.MODERN, ["мир", "две", "вода", "хляб"])
historical = convert_lexicon(modern, yat_lexicon=yat)
print(f"converted lexicon ({len(modern)} modern -> {len(historical)} historical):")
print(" ", sorted(historical.entries))
