"""Command line entry points for the ingestion and embedding sidecar."""

from __future__ import annotations

import logging
import sys

import click

from corpusforge.corpus import load_corpus, save_blocks

from pybridge.encoder import build_encoder, save_model
from pybridge.embed import embed_corpus
from pybridge.finetune import FinetuneConfig, finetune
from pybridge.pdf import pdf_to_blocks


@click.group()
def cli():
    """PDF ingestion, sentence embedding, and fine-tuning sidecar."""


@cli.command("pdf-to-blocks")
@click.argument("pdfs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def pdf_to_blocks_cmd(pdfs, out_path):
    """Extract text blocks from PDFs into a blocks JSONL file."""
    logging.basicConfig(level=logging.WARNING)
    blocks, skipped = pdf_to_blocks(pdfs)
    save_blocks(blocks, out_path)
    click.echo(f"wrote {len(blocks)} documents to {out_path} "
               f"({len(skipped)} skipped)")


@cli.command("embed")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--model", default="tiny", show_default=True)
@click.option("--seed", default=0, show_default=True)
def embed_cmd(corpus_path, out_path, model, seed):
    """Embed corpus abstracts into an EMB1 file."""
    encoder = build_encoder(model, seed=seed)
    n = embed_corpus(corpus_path, encoder, out_path)
    click.echo(f"embedded {n} abstracts to {out_path}")


@cli.command("finetune")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--model", default="tiny", show_default=True)
@click.option("--batch-size", default=128, show_default=True)
@click.option("--max-tokens", default=256, show_default=True)
@click.option("--lr", default=1e-5, show_default=True)
@click.option("--epochs", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
def finetune_cmd(corpus_path, out_dir, model, batch_size, max_tokens, lr,
                 epochs, seed):
    """Contrastively fine-tune an encoder on corpus abstracts."""
    cfg = FinetuneConfig(base_model=model, batch_size=batch_size,
                         max_tokens=max_tokens, lr=lr, epochs=epochs, seed=seed)
    sentences = [p.abstract for p in load_corpus(corpus_path)]
    encoder, losses = finetune(sentences, cfg)
    save_model(encoder, out_dir)
    click.echo(f"trained {len(losses)} batches; "
               f"loss {losses[0]:.4f} -> {losses[-1]:.4f}; saved to {out_dir}")


@cli.command("serve")
@click.option("--model", default="tiny", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8100, show_default=True)
@click.option("--seed", default=0, show_default=True)
def serve_cmd(model, host, port, seed):
    """Run the HTTP embedder endpoint."""
    import uvicorn

    from pybridge.server import create_app

    app = create_app(build_encoder(model, seed=seed))
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
