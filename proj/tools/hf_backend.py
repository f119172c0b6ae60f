#!/usr/bin/env python3
"""Model server for `mtgender --backend real`.

Speaks the JSON-lines protocol of mtg::ExternalProcessBackend on
stdin/stdout using a Hugging Face Marian translation model.

    python3 hf_backend.py --model-id Helsinki-NLP/opus-mt-en-de

Needs torch and transformers.
"""

import argparse
import json
import sys


def load(model_id, revision):
    import torch
    import transformers
    from transformers import MarianMTModel, MarianTokenizer

    tok = MarianTokenizer.from_pretrained(model_id, revision=revision)
    model = MarianMTModel.from_pretrained(model_id, revision=revision)
    model.eval()
    commit = getattr(model.config, "_commit_hash", None) or revision or "unknown"
    version = f"{commit}/transformers-{transformers.__version__}/torch-{torch.__version__}"
    return torch, tok, model, version


class Server:
    def __init__(self, model_id, revision, num_beams):
        self.torch, self.tok, self.model, self.version = load(model_id, revision)
        self.model_id = model_id
        self.num_beams = num_beams

    def info(self, _req):
        return {"name": "hf:" + self.model_id, "version": self.version}

    def translate(self, req):
        batch = self.tok([req["text"]], return_tensors="pt")
        with self.torch.no_grad():
            out = self.model.generate(**batch, num_beams=self.num_beams, max_new_tokens=256)
        return {"text": self.tok.decode(out[0], skip_special_tokens=True)}

    def tokenize(self, req):
        if req.get("side") == "target":
            ids = self.tok(text_target=req["text"]).input_ids
        else:
            ids = self.tok(req["text"]).input_ids
        return {"tokens": self.tok.convert_ids_to_tokens(ids)}

    def contrastive_gradient(self, req):
        torch = self.torch
        model = self.model
        src_ids = self.tok(req["source"], return_tensors="pt").input_ids
        prefix_ids = self.tok.convert_tokens_to_ids(req["prefix"])
        dec_ids = torch.tensor([[model.config.decoder_start_token_id] + prefix_ids])
        original = self.tok.convert_tokens_to_ids(req["original"])
        contrastive = self.tok.convert_tokens_to_ids(req["contrastive"])
        unk = self.tok.unk_token_id
        if unk in (original, contrastive):
            raise ValueError("contrast token is not in the target vocabulary")

        encoder = model.get_encoder()
        decoder = model.get_decoder()
        src_emb = encoder.embed_tokens(src_ids).detach().requires_grad_(True)
        dec_emb = decoder.embed_tokens(dec_ids).detach().requires_grad_(True)
        out = model(
            inputs_embeds=src_emb * encoder.embed_scale,
            decoder_inputs_embeds=dec_emb * decoder.embed_scale,
        )
        logp = torch.log_softmax(out.logits[0, -1], dim=-1)
        stat = logp[original] - logp[contrastive]
        stat.backward()

        # The decoder start token is not part of the prefix.
        return {
            "source_tokens": self.tok.convert_ids_to_tokens(src_ids[0].tolist()),
            "source_gradients": src_emb.grad[0].tolist(),
            "prefix_tokens": list(req["prefix"]),
            "prefix_gradients": dec_emb.grad[0, 1:].tolist(),
            "source_embeddings": src_emb[0].detach().tolist(),
        }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--model-id", default="Helsinki-NLP/opus-mt-en-de")
    ap.add_argument("--revision", default=None)
    ap.add_argument("--num-beams", type=int, default=4)
    args = ap.parse_args()

    server = Server(args.model_id, args.revision, args.num_beams)
    ops = {
        "info": server.info,
        "translate": server.translate,
        "tokenize": server.tokenize,
        "contrastive_gradient": server.contrastive_gradient,
    }
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            reply = ops[req["op"]](req)
        except Exception as exc:  # reported to the caller as BackendFailure
            reply = {"error": f"{type(exc).__name__}: {exc}"}
        sys.stdout.write(json.dumps(reply) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
