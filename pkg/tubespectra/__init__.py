# package declaration
__all__ = ['structures', 'intervals', 'hill', 'dispersion', 'quasimomentum',
           'ranges', 'spectra', 'graph_oracle', 'cli']
