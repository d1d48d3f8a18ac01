from django.db import models


class DesignQuerySet(models.QuerySet):
    def for_components(self, m):
        if m:
            return self.filter(m=m)
        return self

    def with_blocks(self, k):
        if k:
            return self.filter(k=k)
        return self

    def order_designs(self, ordering):
        if ordering == 'recent':
            return self.order_by('-created_at')
        elif ordering == 'size':
            return self.order_by('m', 'k', 'block_size')
        elif ordering == 'name':
            return self.order_by('name')
        return self
