import logging

logging.basicConfig(level='INFO', format='%(message)s')
logging.getLogger('ignite.engine.engine.Engine').setLevel(logging.WARNING)
logging.getLogger('matplotlib').setLevel(logging.WARNING)
LOGGER = logging.getLogger()
