# Generated by Django 5.1.6 on 2025-05-02 09:41

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='StoredDesign',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=255, unique=True)),
                ('m', models.PositiveSmallIntegerField()),
                ('k', models.PositiveSmallIntegerField(default=1)),
                ('block_size', models.PositiveIntegerField()),
                ('blocked', models.BooleanField(default=True)),
                ('rows', models.JSONField(default=list)),
                ('response', models.JSONField(blank=True, null=True)),
                ('source', models.CharField(choices=[('fixture', 'Fixture'), ('constructed', 'Constructed'), ('uploaded', 'Uploaded')], default='uploaded', max_length=12)),
                ('seed', models.BigIntegerField(blank=True, null=True)),
                ('wlp', models.JSONField(blank=True, default=dict)),
                ('provenance', models.JSONField(blank=True, default=list)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('active_effects', models.PositiveSmallIntegerField()),
                ('reps', models.PositiveIntegerField()),
                ('alpha', models.FloatField()),
                ('sigma', models.FloatField()),
                ('seed', models.BigIntegerField()),
                ('power', models.FloatField()),
                ('type1_error', models.FloatField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('design', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='simulations', to='designs.storeddesign')),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
