"""ocrcorpus: build LM pretraining corpora from library OCR and born-digital text.

Pipeline stages: ingest (METS/ALTO + plain text) -> quality filter ->
clean -> deduplicate -> language profile / corpus stats -> pretraining
example export. Plus a training-schedule planner and sequence-labeling
metric calculators.
"""

__version__ = "0.1.0"
