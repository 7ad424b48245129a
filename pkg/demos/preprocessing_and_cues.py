"""
From raw document text to sentence records and cue counts
==========================================================

"""

from reqcause import RawDocument, corpus_stats, detect_cues, preprocess_document

# a raw page as a PDF converter might leave it: headings, page numbers,
# list markers and a figure caption between the requirements
raw = """\
3 Functional Requirements
a) If the pump reports a fault, the controller shall close the inlet valve immediately.
(ii) The operator panel shall display the current tank level in litres at all times.
Figure 4: Panel layout
12

Note: the alarm shall sound when the tank level exceeds the upper limit. Because the
sensor may drift, the controller shall recalibrate it every 24 hours of operation.
"""
doc = RawDocument.from_text("pump-requirements", raw)
records = preprocess_document(doc)
for r in records:
    print(r.paragraph_index, r.sentence_index, r.text)

# cue phrases mark candidates for causal sentences
for r in records:
    print([m.cue.phrase for m in detect_cues(r.text)], r.text[:50])

stats = corpus_stats(records)
print(stats.to_dict())
