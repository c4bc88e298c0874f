"""Expected-utility justifiability: lotteries over a finite prize set and polytopes of Bernoulli utilities."""
