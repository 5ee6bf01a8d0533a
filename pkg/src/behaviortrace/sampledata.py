"""Deterministic synthetic datasets for demos and tests.

Both generators are seeded, so every call reproduces the same bytes.
"""

from __future__ import annotations

import io

import numpy as np

from .dataset import Dataset, ingest

MOVIE_GENRES = (
    "Action",
    "Adventure",
    "Comedy",
    "Drama",
    "Horror",
    "Musical",
    "Thriller",
    "Western",
)
MOVIE_RATINGS = ("G", "PG", "PG-13", "R")
MOVIE_RATING_WEIGHTS = (0.5, 0.2, 0.18, 0.12)
CREATIVE_TYPES = (
    "Contemporary Fiction",
    "Historical Fiction",
    "Fantasy",
    "Science Fiction",
    "Kids Fiction",
    "Documentary",
)

OWNERSHIP_TYPES = ("Mortgage", "Own", "Rent")
OWNERSHIP_WEIGHTS = (0.45, 0.30, 0.25)


def movies_csv(n: int = 709, seed: int = 7) -> str:
    """A movies table: 5 quantitative, 1 temporal, 3 nominal attributes.

    Budgets skew well under 50M, content ratings skew heavily toward G;
    both skews are what make deviation demos interesting.
    """
    rng = np.random.RandomState(seed)
    buf = io.StringIO()
    buf.write(
        "Production Budget,Worldwide Gross,Running Time,IMDB Rating,"
        "Rotten Tomatoes Rating,Release Year,Content Rating,Genre,Creative Type\n"
    )
    for _ in range(n):
        budget = float(np.round(rng.lognormal(np.log(2.2e7), 0.9), -4))
        gross = float(np.round(budget * rng.lognormal(0.3, 0.8), -4))
        runtime = int(np.clip(rng.normal(112, 19), 62, 205))
        imdb = round(float(np.clip(rng.normal(6.3, 1.1), 1.0, 9.9)), 1)
        tomatoes = int(np.clip(rng.normal(55, 22), 1, 100))
        year = int(rng.randint(1985, 2011))
        rating = MOVIE_RATINGS[rng.choice(len(MOVIE_RATINGS), p=MOVIE_RATING_WEIGHTS)]
        genre = MOVIE_GENRES[rng.randint(len(MOVIE_GENRES))]
        creative = CREATIVE_TYPES[rng.randint(len(CREATIVE_TYPES))]
        buf.write(
            f"{budget:.0f},{gross:.0f},{runtime},{imdb},{tomatoes},{year},"
            f"{rating},{genre},{creative}\n"
        )
    return buf.getvalue()


def loans_csv(n: int = 400, seed: int = 11) -> str:
    """A loan-review table built around the Home Ownership Type skew."""
    rng = np.random.RandomState(seed)
    buf = io.StringIO()
    buf.write("Home Ownership Type,Age,Income,Loan Amount\n")
    for _ in range(n):
        ownership = OWNERSHIP_TYPES[rng.choice(len(OWNERSHIP_TYPES), p=OWNERSHIP_WEIGHTS)]
        age = int(rng.randint(21, 71))
        income = int(np.round(rng.lognormal(np.log(52000), 0.5), -2))
        amount = int(np.round(rng.uniform(2000, 40000), -2))
        buf.write(f"{ownership},{age},{income},{amount}\n")
    return buf.getvalue()


def movies_dataset(n: int = 709, seed: int = 7) -> Dataset:
    return ingest(movies_csv(n, seed))


def loans_dataset(n: int = 400, seed: int = 11) -> Dataset:
    return ingest(loans_csv(n, seed))
