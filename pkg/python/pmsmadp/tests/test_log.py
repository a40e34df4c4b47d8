import unittest, logging, os, tempfile

from pmsmadp.common.log import Loglevel, Loggable, configure_logging, ROOT_LOGGER, TRACE, NOTE

class Component(Loggable):
    _component = 'test'

class Capture(logging.Handler):
    def __init__(self):
        super().__init__(level=0)
        self.records = []

    def emit(self, record):
        self.records.append(record)


class Levels(unittest.TestCase):

    def test_to_logging(self):
        self.assertEqual(Loglevel.TRACE.to_logging(), TRACE)
        self.assertEqual(Loglevel.DEBUG.to_logging(), logging.DEBUG)
        self.assertEqual(Loglevel.NOTE.to_logging(), NOTE)
        self.assertEqual(Loglevel.WARN.to_logging(), logging.WARNING)
        self.assertEqual(Loglevel.FATAL.to_logging(), logging.CRITICAL)
        self.assertGreater(Loglevel.OFF.to_logging(), logging.CRITICAL)

    def test_parse(self):
        self.assertEqual(Loglevel.parse('note'), Loglevel.NOTE)
        self.assertEqual(Loglevel.parse('WARN'), Loglevel.WARN)
        self.assertEqual(Loglevel.parse(Loglevel.ERROR), Loglevel.ERROR)
        with self.assertRaises(ValueError):
            Loglevel.parse('loud')


class Logging(unittest.TestCase):

    def setUp(self):
        self.capture = Capture()
        self.logger = logging.getLogger(ROOT_LOGGER)
        self.logger.addHandler(self.capture)
        self.old_level = self.logger.level
        self.logger.setLevel(1)

    def tearDown(self):
        self.logger.removeHandler(self.capture)
        self.logger.setLevel(self.old_level)

    def test_logger_name(self):
        self.assertEqual(Component().logger.name, 'pmsmadp.test')
        self.assertEqual(Component('x').logger.name, 'pmsmadp.test.x')

    def test_levels_and_formatting(self):
        c = Component()
        c.trace('trace')
        c.debug('debug')
        c.info('info')
        c.note('note')
        c.warn('warn')
        c.error('error')
        c.fatal('fatal')
        c.log(Loglevel.INFO, 'log {x} {0}', 'test', x='33')
        messages = [r.getMessage() for r in self.capture.records]
        self.assertEqual(messages, [
            'trace', 'debug', 'info', 'note', 'warn', 'error', 'fatal', 'log 33 test'])
        self.assertEqual(self.capture.records[3].levelname, 'NOTE')
        self.assertEqual(self.capture.records[0].levelname, 'TRACE')

    def test_no_format_without_args(self):
        Component().info('{braces}')
        self.assertEqual(self.capture.records[-1].getMessage(), '{braces}')

    def test_bad_level(self):
        with self.assertRaisesRegex(TypeError, "level must be a Loglevel"):
            Component().log(33, 'oops')

    def test_caller_attribution(self):
        Component().info('here')
        self.assertEqual(self.capture.records[-1].funcName, 'test_caller_attribution')


class Configure(unittest.TestCase):

    def test_tee(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'log.txt')
            root = configure_logging(Loglevel.OFF, {path: Loglevel.NOTE})
            try:
                c = Component()
                c.info('not written')
                c.note('written')
                for handler in root.handlers:
                    handler.flush()
                with open(path) as f:
                    text = f.read()
            finally:
                for handler in list(root.handlers):
                    root.removeHandler(handler)
                    handler.close()
            self.assertIn('written', text)
            self.assertNotIn('not written', text)
            self.assertIn('pmsmadp.test', text)

    def test_bad_tee(self):
        with self.assertRaises(TypeError):
            configure_logging(Loglevel.INFO, {'x': 3})

if __name__ == '__main__':
    unittest.main()
